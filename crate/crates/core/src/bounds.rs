//! Closed-form lower bounds: conformal dimension from branching data and
//! the genus estimate for surfaces carrying a branching graph.

use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// `1 + ln n / ln(3m - 7)`.
pub fn confdim_lower_branching(n: u64, m: u64) -> Result<f64> {
    if n < 1 || m < 5 {
        return Err(Error::BadParams(format!("need n >= 1 and m >= 5, got n={n}, m={m}")));
    }
    confdim_lower_mackay(n, 3 * m - 7)
}

/// `1 + ln V / ln H` for a round tree with vertical branching `V` and
/// horizontal branching `H`.
pub fn confdim_lower_mackay(v: u64, h: u64) -> Result<f64> {
    if v < 1 || h < 2 {
        return Err(Error::BadParams(format!("need V >= 1 and H >= 2, got V={v}, H={h}")));
    }
    Ok(1.0 + (v as f64).ln() / (h as f64).ln())
}

/// Lower bound `1 + (3n - 7) E / (10 (n + 1))` on the genus of a closed
/// surface whose 1-skeleton contains an (n, m)-branching graph with `E`
/// edges.
pub fn genus_lower_bound(n: u64, edges: u64) -> Result<f64> {
    if n < 3 {
        return Err(Error::BadParams(format!("need n >= 3, got {n}")));
    }
    if edges < 1 {
        return Err(Error::BadParams("need at least one edge".into()));
    }
    Ok(1.0 + (3 * n - 7) as f64 * edges as f64 / (10 * (n + 1)) as f64)
}

/// Fewest edges of a girth-5 graph with minimum valence `n + 1`:
/// `(n+1) + (n+1)n + (n+1)n^2/2`, rounded up.
pub fn min_edges(n: u64) -> u64 {
    let k = n + 1;
    k + k * n + (k * n * n).div_ceil(2)
}

/// Branching parameters of the incidence graph of a generalized `m`-gon of
/// order `q`.
pub fn genm_branching_params(m: u64, q: u64) -> Result<(u64, u64)> {
    match m {
        3 => {
            // floor(q + 1 - sqrt q), computed exactly
            let mut s = (q as f64).sqrt() as u64;
            while s * s > q {
                s -= 1;
            }
            while (s + 1) * (s + 1) <= q {
                s += 1;
            }
            let n = if s * s == q { q + 1 - s } else { q - s };
            Ok((n, 6))
        }
        m if m > 3 => Ok((q, 2 * m)),
        _ => Err(Error::BadParams(format!("no branching statement for m = {m}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub inputs: BTreeMap<String, u64>,
    pub value: f64,
    pub formula: String,
}

impl BoundReport {
    pub fn branching(n: u64, m: u64) -> Result<BoundReport> {
        Ok(BoundReport {
            name: "confdim_branching".into(),
            inputs: BTreeMap::from([("n".into(), n), ("m".into(), m)]),
            value: confdim_lower_branching(n, m)?,
            formula: "1 + ln(n) / ln(3m - 7)".into(),
        })
    }

    pub fn mackay(v: u64, h: u64) -> Result<BoundReport> {
        Ok(BoundReport {
            name: "confdim_round_tree".into(),
            inputs: BTreeMap::from([("V".into(), v), ("H".into(), h)]),
            value: confdim_lower_mackay(v, h)?,
            formula: "1 + ln(V) / ln(H)".into(),
        })
    }

    pub fn genus(n: u64, edges: u64) -> Result<BoundReport> {
        Ok(BoundReport {
            name: "genus".into(),
            inputs: BTreeMap::from([("n".into(), n), ("E".into(), edges)]),
            value: genus_lower_bound(n, edges)?,
            formula: "1 + (3n - 7) E / (10 (n + 1))".into(),
        })
    }

    pub fn min_edges(n: u64) -> BoundReport {
        BoundReport {
            name: "min_edges".into(),
            inputs: BTreeMap::from([("n".into(), n)]),
            value: min_edges(n) as f64,
            formula: "ceil((n+1) + (n+1) n + (n+1) n^2 / 2)".into(),
        }
    }
}
