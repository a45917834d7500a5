use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{FrequencySign, KGrid, PhysicalConstants};
use crate::polarization::{Mode, Vec3};
use crate::state::{Normalization, PhotonState, DEFAULT_M};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub k_max: f64,
    #[serde(default = "yes")]
    pub offset: bool,
}

fn yes() -> bool {
    true
}

fn default_m() -> i32 {
    DEFAULT_M
}

fn default_mode() -> Mode {
    Mode::Plus
}

fn default_sign() -> FrequencySign {
    FrequencySign::Plus
}

fn default_normalization() -> Normalization {
    Normalization::Invariant
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Gaussian {
        k0: Vec3,
        s: f64,
        #[serde(default = "default_mode")]
        mode: Mode,
        #[serde(default = "default_sign")]
        sign: FrequencySign,
        #[serde(default = "default_m")]
        m: i32,
        #[serde(default = "default_normalization")]
        normalization: Normalization,
    },
    PlaneWave {
        q: Vec3,
        #[serde(default = "default_mode")]
        mode: Mode,
        #[serde(default = "default_sign")]
        sign: FrequencySign,
        /// `[re, im]`.
        amp: [f64; 2],
    },
    Localized {
        y: Vec3,
        #[serde(default = "default_mode")]
        mode: Mode,
        #[serde(default = "default_sign")]
        sign: FrequencySign,
        #[serde(default = "default_normalization")]
        normalization: Normalization,
    },
}

impl Default for StateSpec {
    fn default() -> Self {
        StateSpec::Gaussian {
            k0: [0.0, 0.0, 1.0],
            s: 1.5,
            mode: Mode::Plus,
            sign: FrequencySign::Plus,
            m: DEFAULT_M,
            normalization: Normalization::Invariant,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub parseval: f64,
    pub unitarity: f64,
    pub gauge: f64,
    pub hermiticity: f64,
    pub density: f64,
    pub oracle: f64,
    pub cancellation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            parseval: 1e-10,
            unitarity: 1e-12,
            gauge: 1e-12,
            hermiticity: 1e-6,
            density: 1e-10,
            oracle: 1e-10,
            cancellation: 1e-12,
        }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<()> {
        let all = [
            ("parseval", self.parseval),
            ("unitarity", self.unitarity),
            ("gauge", self.gauge),
            ("hermiticity", self.hermiticity),
            ("density", self.density),
            ("oracle", self.oracle),
            ("cancellation", self.cancellation),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("tolerance {name} must be > 0, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSpec,
    #[serde(default)]
    pub constants: PhysicalConstants,
    #[serde(default)]
    pub state: StateSpec,
    #[serde(default = "default_experiment")]
    pub experiment: String,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_experiment() -> String {
    "run".into()
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: GridSpec { n: 16, k_max: 8.0, offset: true },
            constants: PhysicalConstants::default(),
            state: StateSpec::default(),
            experiment: default_experiment(),
            output: default_output(),
            tolerances: Tolerances::default(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        self.tolerances.validate()?;
        self.build_grid().map(|_| ())
    }

    pub fn build_grid(&self) -> Result<Arc<KGrid>> {
        Ok(Arc::new(KGrid::new(self.grid.n, self.grid.k_max, self.grid.offset, self.constants)?))
    }

    pub fn build_state(&self, grid: &Arc<KGrid>) -> Result<PhotonState> {
        match self.state {
            StateSpec::Gaussian { k0, s, mode, sign, m, normalization } => {
                PhotonState::gaussian_packet_in(grid, k0, s, mode, sign, m, normalization)
            }
            StateSpec::PlaneWave { q, mode, sign, amp } => {
                PhotonState::plane_wave(grid, q, mode, sign, Complex64::new(amp[0], amp[1]))
            }
            StateSpec::Localized { y, mode, sign, normalization } => {
                PhotonState::localized_state(grid, y, mode, sign, normalization, DEFAULT_M)
            }
        }
    }
}
