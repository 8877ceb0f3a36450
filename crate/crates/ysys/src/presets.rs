//! Named built-in pairs: the six finite-type rank-2 pairs, their opposites,
//! the three-slice variant of the first pair, and a zero-interaction pair.

use crate::error::{Error, Result};
use crate::polymat::YDatum;

/// The k-th finite-type pair, 1-based.
///
/// (1) A+ = [[1+z^2, -z], [-z, 1+z^2]],            A- = diag(1+z^2, 1+z^2)
/// (2) A+ = [[1+z^2, -z], [-z-z^5, 1+z^6]],        A- = [[1+z^2, 0], [-z^3, 1+z^6]]
/// (3) A+ = [[1+z^2, -z], [-z-z^5-z^9, 1+z^10]],   A- = [[1+z^2, 0], [-z^3-z^7, 1+z^10]]
/// (4) A+ = [[1+z^2, -z], [-z, 1+z^2]],            A- = diag(1+z^2-z, 1+z^2-z)
/// (5) A+ = [[1+z^2, -z], [-z-z^2, 1+z^3]],        A- = [[1+z^2-z, 0], [0, 1+z^3]]
/// (6) A+ = [[1+z^2, -z], [-z, 1+z^2-z]],          A- = diag(1+z^2, 1+z^2)
pub fn table1(k: usize) -> YDatum {
    let labels = vec!["1".to_string(), "2".to_string()];
    let datum = |r: Vec<u32>, n: Vec<((usize, usize, u32), i64)>| {
        YDatum::new(labels.clone(), r, n).expect("built-in pair is valid")
    };
    match k {
        1 => datum(vec![2, 2], vec![((0, 1, 1), 1), ((1, 0, 1), 1)]),
        2 => datum(
            vec![2, 6],
            vec![
                ((0, 1, 1), 1),
                ((1, 0, 1), 1),
                ((1, 0, 3), -1),
                ((1, 0, 5), 1),
            ],
        ),
        3 => datum(
            vec![2, 10],
            vec![
                ((0, 1, 1), 1),
                ((1, 0, 1), 1),
                ((1, 0, 3), -1),
                ((1, 0, 5), 1),
                ((1, 0, 7), -1),
                ((1, 0, 9), 1),
            ],
        ),
        4 => datum(
            vec![2, 2],
            vec![
                ((0, 1, 1), 1),
                ((1, 0, 1), 1),
                ((0, 0, 1), -1),
                ((1, 1, 1), -1),
            ],
        ),
        5 => datum(
            vec![2, 3],
            vec![
                ((0, 1, 1), 1),
                ((1, 0, 1), 1),
                ((1, 0, 2), 1),
                ((0, 0, 1), -1),
            ],
        ),
        6 => datum(
            vec![2, 2],
            vec![((0, 1, 1), 1), ((1, 0, 1), 1), ((1, 1, 1), 1)],
        ),
        _ => panic!("table1 rows are numbered 1..=6"),
    }
}

/// The pair with diagonal 1+z^3 and off-diagonals -z^2, -z: a three-slice
/// variant of row (1).
pub fn slice_example() -> YDatum {
    YDatum::new(
        vec!["1".to_string(), "2".to_string()],
        vec![3, 3],
        vec![((0usize, 1usize, 2u32), 1i64), ((1, 0, 1), 1)],
    )
    .expect("built-in pair is valid")
}

/// Rank-1 pair with no interaction: A+ = A- = (1 + z^r).
pub fn zero_interaction(r: u32) -> YDatum {
    YDatum::new(vec!["1".to_string()], vec![r], []).expect("built-in pair is valid")
}

/// Resolve a preset name: `table1:K`, `table1:Kop`, `slice:a2`, `zero:R`.
pub fn by_name(name: &str) -> Result<YDatum> {
    let err = || Error::Validation(format!("unknown preset {name}"));
    if let Some(rest) = name.strip_prefix("table1:") {
        let (num, op) = match rest.strip_suffix("op") {
            Some(n) => (n, true),
            None => (rest, false),
        };
        let k: usize = num.parse().map_err(|_| err())?;
        if !(1..=6).contains(&k) {
            return Err(err());
        }
        let d = table1(k);
        return Ok(if op { d.opposite() } else { d });
    }
    if name == "slice:a2" {
        return Ok(slice_example());
    }
    if let Some(rest) = name.strip_prefix("zero:") {
        let r: u32 = rest.parse().map_err(|_| err())?;
        if r < 1 {
            return Err(err());
        }
        return Ok(zero_interaction(r));
    }
    Err(err())
}

/// All preset names shipped with the engine.
pub fn all_names() -> Vec<String> {
    let mut v: Vec<String> = (1..=6).map(|k| format!("table1:{k}")).collect();
    v.extend((1..=6).map(|k| format!("table1:{k}op")));
    v.push("slice:a2".to_string());
    v.push("zero:1".to_string());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_resolve() {
        for name in all_names() {
            assert!(by_name(&name).is_ok(), "{name}");
        }
        assert!(by_name("table1:7").is_err());
        assert!(by_name("bogus").is_err());
    }

    #[test]
    fn op_negates_n() {
        let d = by_name("table1:2op").unwrap();
        assert_eq!(d, table1(2).opposite());
    }
}
