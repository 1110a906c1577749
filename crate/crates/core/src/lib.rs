//! Analysis toolkit for UAV uplink data aggregation from ground IoT devices.
//!
//! Two collection schemes are modelled. In the device-centric scheme (`Scheme::Urdc`) the
//! UAV flies to each device and collects while hovering close to it; in the UAV-centric
//! scheme (`Scheme::Suc`) the UAV hovers over the cell centre for the whole slot.
//!
//! The crate covers the analytical side (interference Laplace transforms, success
//! probability, meta distribution, outage capacity), the device queue, rotorcraft energy,
//! and an exact-network Monte Carlo simulator used to cross-check the analysis.

pub mod analysis;
pub mod channel;
pub mod config;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod quadrature;
pub mod queueing;
pub mod report;
pub mod rng;
pub mod sim;
pub mod validate;

pub use config::{DerivedQuantities, Environment, EnvironmentProfile, ScenarioConfig};
pub use error::{Error, Result};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Data collection scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Device-centric: UAV travels to each device, transmits over `t_dc` of the slot.
    Urdc,
    /// UAV-centric: UAV hovers at the cell centre, devices transmit over the full slot.
    Suc,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Urdc, Scheme::Suc];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Urdc => "urdc",
            Scheme::Suc => "suc",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "urdc" | "urdc-ul" => Ok(Scheme::Urdc),
            "suc" | "suc-ul" => Ok(Scheme::Suc),
            other => Err(Error::InvalidInput(format!("unknown scheme `{other}` (expected urdc or suc)"))),
        }
    }
}

/// Line-of-sight state of a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkState {
    Los,
    Nlos,
}

impl LinkState {
    pub const BOTH: [LinkState; 2] = [LinkState::Los, LinkState::Nlos];
}

/// Convert decibels to a linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear ratio to decibels.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Convert dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * db_to_linear(dbm)
}

/// Convert watts to dBm.
pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w / 1e-3)
}
