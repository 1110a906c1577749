//! `start:stop:step` grids.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Inclusive arithmetic grid. The end point is kept when it lies within a rounding error
/// of a whole number of steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn single(x: f64) -> Self {
        Grid { start: x, stop: x, step: 1.0 }
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("bad number {p:?} in grid {s:?}"));
        let g = match parts.as_slice() {
            [x] => Grid::single(num(x)?),
            [a, b, c] => Grid { start: num(a)?, stop: num(b)?, step: num(c)? },
            _ => return Err(format!("grid {s:?} is not start:stop:step")),
        };
        if !(g.start.is_finite() && g.stop.is_finite() && g.step.is_finite()) {
            return Err(format!("grid {s:?} has non-finite values"));
        }
        if !(g.step > 0.0) {
            return Err(format!("grid {s:?} needs a positive step"));
        }
        if g.stop < g.start {
            return Err(format!("grid {s:?} is empty"));
        }
        Ok(g)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

impl Serialize for Grid {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!("-20:65:1".parse::<Grid>().unwrap().len(), 86);
        assert_eq!("1e6:11e6:1e6".parse::<Grid>().unwrap().len(), 11);
        assert_eq!("0.05:0.95:0.05".parse::<Grid>().unwrap().len(), 19);
        assert_eq!("7".parse::<Grid>().unwrap().values(), vec![7.0]);
        assert!("1:0:1".parse::<Grid>().is_err());
        assert!("0:1:0".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
    }

    #[test]
    fn display_round_trip() {
        let g: Grid = "-20:65:2.5".parse().unwrap();
        assert_eq!(g.to_string().parse::<Grid>().unwrap(), g);
    }
}
