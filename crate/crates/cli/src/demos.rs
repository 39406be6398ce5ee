//! Built-in examples, looked up by name.

use orbitset::APSet;

use crate::error::CliError;
use crate::input::{Overrides, ProblemFile};
use crate::recurrence_zero_set;

pub trait Demo {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    /// Something a user can paste back in: a problem file or a command line.
    fn source(&self) -> String;
    fn run(&self, overrides: &Overrides) -> Result<APSet, CliError>;
}

struct ProblemDemo {
    name: &'static str,
    summary: &'static str,
    json: &'static str,
}

impl Demo for ProblemDemo {
    fn name(&self) -> &'static str {
        self.name
    }

    fn summary(&self) -> &'static str {
        self.summary
    }

    fn source(&self) -> String {
        self.json.to_string()
    }

    fn run(&self, overrides: &Overrides) -> Result<APSet, CliError> {
        let file = ProblemFile::parse(self.json)?;
        let pipeline = overrides.apply(&file.options).pipeline()?;
        file.problem.solve(&pipeline)
    }
}

struct RecurrenceDemo {
    name: &'static str,
    summary: &'static str,
    coeffs: &'static [i64],
    init: &'static [i64],
    target: i64,
}

fn joined(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

impl Demo for RecurrenceDemo {
    fn name(&self) -> &'static str {
        self.name
    }

    fn summary(&self) -> &'static str {
        self.summary
    }

    fn source(&self) -> String {
        format!(
            "recurrence zero-set --coeffs={} --init={} --target={}",
            joined(self.coeffs),
            joined(self.init),
            self.target
        )
    }

    fn run(&self, overrides: &Overrides) -> Result<APSet, CliError> {
        let big = |v: &[i64]| v.iter().map(|&x| x.into()).collect();
        recurrence_zero_set(
            big(self.coeffs),
            big(self.init),
            self.target.into(),
            overrides,
        )
    }
}

pub fn registry() -> Vec<Box<dyn Demo>> {
    vec![
        Box::new(ProblemDemo {
            name: "toric-shear",
            summary: "P = (3, 2) under (x, y) -> (xy, y), when is x = 48",
            json: r#"{"kind":"toric","map":[[1,1],[0,1]],"point":["3","2"],"binomials":[{"exponents":[1,0],"constant":"48"}]}"#,
        }),
        Box::new(ProblemDemo {
            name: "toric-inverse",
            summary: "P = (2) under x -> 1/x, when is x = 2",
            json: r#"{"kind":"toric","map":[[-1]],"point":["2"],"binomials":[{"exponents":[1],"constant":"2"}]}"#,
        }),
        Box::new(ProblemDemo {
            name: "doubling",
            summary: "1 under doubling on Z, when is it in 1 + 3Z",
            json: r#"{"kind":"group","rank":1,"phi":{"free_matrix":[[2]]},"point":{"free":[1]},"cosets":[{"rep":{"free":[1]},"generators":[{"free":[3]}]}]}"#,
        }),
        Box::new(ProblemDemo {
            name: "shear-line",
            summary: "(0, 1) under a shear of Z^2, when is it in (2, 1) + <(3, 0)>",
            json: r#"{"kind":"group","rank":2,"phi":{"free_matrix":[[1,1],[0,1]]},"point":{"free":[0,1]},"cosets":[{"rep":{"free":[2,1]},"generators":[{"free":[3,0]}]}]}"#,
        }),
        Box::new(ProblemDemo {
            name: "torsion-mixing",
            summary: "free part feeding Z/4 each step, when is the torsion part 2",
            json: r#"{"kind":"group","invariant_factors":[4],"rank":1,"phi":{"free_matrix":[[1]],"torsion_matrix":[[1]],"mixing":[[1]]},"point":{"torsion":[0],"free":[1]},"cosets":[{"rep":{"torsion":[2],"free":[1]},"generators":[{"torsion":[0],"free":[2]}]}]}"#,
        }),
        Box::new(ProblemDemo {
            name: "no-targets",
            summary: "doubling on Z with no cosets at all",
            json: r#"{"kind":"group","rank":1,"phi":{"free_matrix":[[2]]},"point":{"free":[1]},"cosets":[]}"#,
        }),
        Box::new(RecurrenceDemo {
            name: "even-zeros",
            summary: "u(k+2) = 4 u(k), u = 0, -4, ...: zero exactly at even k",
            coeffs: &[0, 4],
            init: &[0, -4],
            target: 0,
        }),
        Box::new(RecurrenceDemo {
            name: "fibonacci-55",
            summary: "where Fibonacci takes the value 55",
            coeffs: &[1, 1],
            init: &[0, 1],
            target: 55,
        }),
    ]
}

pub fn find(name: &str) -> Option<Box<dyn Demo>> {
    registry().into_iter().find(|d| d.name() == name)
}
