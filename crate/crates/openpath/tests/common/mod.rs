#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use openpath::config::{DesignChoice, LatticeConfig, Potentials, QuadConfig, ScenarioConfig};
use openpath::io::{self, FREQUENCY_COLUMN, POWER_COLUMN};
use openpath::synthetic::generate_synthetic_with;
use openpath_core::spectra::DeviationSeries;
use tempfile::TempDir;

/// Γ(1/4)² / (4√π): scaling the square lattice by this gives |Δ| = 1.
pub const UNIT_DISCRIMINANT_SCALE: f64 = 1.8540746773013719;

pub const WORKED_TOML: &str = r#"
k0 = 1.0
grid = 200
lambda = 1e-6
link = "identity"
design = "intercept-only"
seed = 0
frequency = "frequency.csv"
power = "power.csv"
wing = "wing.csv"
history = "history.csv"
potentials = "derive"
colors = [0.8, 0.05, 0.3, 0.4, 0.5]
v0 = 0.0

[lattice]
omega1 = [1.8540746773013719, 0.0]
omega2 = [0.0, 1.8540746773013719]

[quad]
omega = [1.0, 3.0, 2.0, 3.0]
bound = 32
"#;

/// The worked scenario written to a fresh directory.
pub struct Scenario {
    pub dir: TempDir,
    pub config: ScenarioConfig,
    pub frequency: DeviationSeries,
    pub power: DeviationSeries,
}

impl Scenario {
    pub fn worked() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path();
        let s = generate_synthetic_with(0, 2.0, 24, 0.0).unwrap();
        io::write_series(&path.join("frequency.csv"), FREQUENCY_COLUMN, &s.frequency).unwrap();
        io::write_series(&path.join("power.csv"), POWER_COLUMN, &s.power).unwrap();
        fs::write(path.join("wing.csv"), "t,u,v\n1,0,1\n2,0,1\n3,0,1\n4,0,1\n").unwrap();
        // Counts average 5.
        fs::write(
            path.join("history.csv"),
            "c1,c2,c3,c4,count\n0.1,0.2,0.3,0.4,3\n0.5,0.6,0.7,0.8,7\n0.2,0.9,0.1,0.3,4\n0.7,0.4,0.6,0.2,6\n",
        )
        .unwrap();
        fs::write(path.join("scenario.toml"), WORKED_TOML).unwrap();
        let config = ScenarioConfig::load(&path.join("scenario.toml")).unwrap();
        Scenario {
            dir,
            config,
            frequency: s.frequency,
            power: s.power,
        }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    pub fn config_path(&self) -> PathBuf {
        self.path("scenario.toml")
    }

    /// Replaces a data file and points the config at it.
    pub fn write(&mut self, name: &str, contents: &str) -> PathBuf {
        let p = self.path(name);
        fs::write(&p, contents).unwrap();
        p
    }

    pub fn set_wing(&mut self, contents: &str) {
        self.config.wing = Some(self.write("wing_alt.csv", contents));
    }

    pub fn set_history(&mut self, contents: &str) {
        self.config.history = Some(self.write("history_alt.csv", contents));
    }

    pub fn set_lattice(&mut self, omega1: [f64; 2], omega2: [f64; 2]) {
        self.config.lattice = Some(LatticeConfig { omega1, omega2 });
    }

    pub fn set_quad(&mut self, omega: [f64; 4]) {
        self.config.quad = Some(QuadConfig { omega, bound: 32 });
    }

    pub fn set_potentials(&mut self, v_in: f64, v_out: f64) {
        self.config.potentials = Potentials::Explicit { v_in, v_out };
    }

    pub fn set_design(&mut self, d: DesignChoice) {
        self.config.design = d;
    }
}

pub fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap()
}

/// `0.5·(ln a + ln b)` written out for oracle values.
pub fn half_log_sum(a: f64, b: f64) -> f64 {
    0.5 * (a.ln() + b.ln())
}
