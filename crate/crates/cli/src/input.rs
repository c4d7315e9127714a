//! Loading algebras and parsing congruence and subset arguments.

use std::fs;

use unialg::builtin::builtin;
use unialg::lattice::{self, Partition, Subset};
use unialg::{parse_algebra, FiniteAlgebra};

use crate::Failure;

/// `builtin:NAME` or a path to an algebra file.
pub fn load_algebra(spec: &str) -> Result<FiniteAlgebra, Failure> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return Ok(builtin(name)?);
    }
    let text = fs::read_to_string(spec).map_err(|e| Failure::input(format!("{spec}: {e}")))?;
    parse_algebra(&text).map_err(|e| Failure::input(format!("{spec}: {e}")))
}

/// `0`, `1`, seed pairs `a-b,c-d` (closed to the generated congruence), or
/// an explicit partition `0 3|1 4|2 5` (checked to be a congruence).
pub fn parse_congruence(a: &FiniteAlgebra, text: &str) -> Result<Partition, Failure> {
    let n = a.size();
    let text = text.trim();
    match text {
        "0" => return Ok(Partition::zero(n)),
        "1" => return Ok(Partition::one(n)),
        _ => {}
    }
    if text.contains('|') {
        let p = Partition::parse_sized(text, n)?;
        if !lattice::is_congruence(a, &p)? {
            return Err(Failure::input(format!("`{text}` is not a congruence")));
        }
        return Ok(p);
    }
    let mut pairs = Vec::new();
    for item in text.split(',') {
        let (x, y) = item
            .split_once('-')
            .ok_or_else(|| Failure::input(format!("bad seed pair `{item}`, expected a-b")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&v| v < n)
                .ok_or_else(|| Failure::input(format!("bad element `{s}` for size {n}")))
        };
        pairs.push((parse(x)?, parse(y)?));
    }
    Ok(lattice::congruence_generated(a, &pairs)?)
}

/// A generator list `0,2` or `{0,2}`, closed under the operations.
pub fn parse_subalgebra(a: &FiniteAlgebra, text: &str) -> Result<Subset, Failure> {
    let gens = Subset::parse(a.size(), text)?;
    Ok(lattice::subuniverse_closure(a, &gens)?)
}
