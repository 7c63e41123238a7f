//! Sweep grids: `a,b,c`, `lo:hi:n` (linear) or `lo:hi:n:log` (logarithmic).

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    text: String,
    values: Vec<f64>,
}

impl Grid {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![lo];
        }
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let (a, b) = (lo.log10(), hi.log10());
        Self::linspace(a, b, n)
            .into_iter()
            .enumerate()
            .map(|(i, e)| match i {
                0 => lo,
                _ if i == n - 1 => hi,
                _ => 10f64.powf(e),
            })
            .collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let values = match parts.len() {
            1 => s.split(',').map(number).collect::<Result<Vec<_>, _>>()?,
            3 | 4 => {
                let lo = number(parts[0])?;
                let hi = number(parts[1])?;
                let n: usize = parts[2]
                    .trim()
                    .parse()
                    .map_err(|_| format!("point count '{}' is not a positive integer", parts[2]))?;
                if n == 0 {
                    return Err("a grid needs at least one point".into());
                }
                match parts.get(3).map(|p| p.trim()) {
                    None | Some("lin") => Grid::linspace(lo, hi, n),
                    Some("log") => {
                        if lo <= 0.0 || hi <= 0.0 {
                            return Err("logarithmic grid bounds must be positive".into());
                        }
                        Grid::logspace(lo, hi, n)
                    }
                    Some(other) => return Err(format!("unknown spacing '{other}' (expected lin or log)")),
                }
            }
            _ => return Err(format!("cannot parse grid '{s}'; use a,b,c or lo:hi:n[:log]")),
        };
        Ok(Grid {
            text: s.to_string(),
            values,
        })
    }
}
