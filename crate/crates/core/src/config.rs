//! TOML system description.
//!
//! Keys carry their unit as a suffix (`mass_kg`, `f_m_hz`). Frequencies are
//! read in Hz and converted to rad/s here, once. Unknown keys are rejected.
//!
//! ```toml
//! [oscillator]
//! mass_kg = 1e-6
//! f_m_hz = 1.0
//! q = 1e5
//! damping = "viscous"
//! temperature_k = 300.0
//!
//! [cavity]
//! length_m = 0.1
//! finesse = 100.0
//! r1_m = "flat"
//! r2_m = 0.2
//!
//! [laser]
//! wavelength_m = 1064e-9
//! p_circ_w = 1.0
//! ```

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    disk_area, hz_to_rad, Curvature, DampingModel, Environment, Gas, LaserDrive, MechanicalOscillator, OpticalCavity,
};
use crate::suspension::{IntrinsicLoss, Suspension, WireMaterial, DEFAULT_SAFETY_FACTOR};
use crate::torsion::{TorsionBar, UNIFORM_BAR};

/// Density assumed for a disk mirror when its thickness is derived from the
/// mass, kg/m³ (fused silica).
pub const DEFAULT_DISK_DENSITY: f64 = 2200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DampingKind {
    #[default]
    Viscous,
    Structure,
}

impl From<DampingKind> for DampingModel {
    fn from(k: DampingKind) -> Self {
        match k {
            DampingKind::Viscous => DampingModel::Viscous,
            DampingKind::Structure => DampingModel::Structure,
        }
    }
}

/// A number, or a keyword such as `"flat"` or `"auto"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberOr {
    Number(f64),
    Keyword(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorSection {
    pub mass_kg: f64,
    pub f_m_hz: f64,
    pub q: f64,
    #[serde(default)]
    pub damping: DampingKind,
    pub temperature_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySection {
    pub length_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finesse: Option<f64>,
    /// `κ_in/κ` when the cavity is given by its finesse. Defaults to 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_in: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_loss: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1_m: Option<NumberOr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r2_m: Option<NumberOr>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaserSection {
    pub wavelength_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_in_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_circ_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detuning_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub efficiency: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSection {
    pub pressure_pa: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gas: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area_m2: Option<NumberOr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disk_diameter_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disk_thickness_m: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuspensionSection {
    pub material: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_w_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_w_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_w: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bond_loss: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_el: Option<f64>,
    /// Surface-loss dominated wire: `Q_el = q_el_per_m_radius · r`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_el_per_m_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thermoelastic_nulled: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorsionSection {
    pub d_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevitationSection {
    pub enabled: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convex_downward: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_length_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_finesse: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_r1_m: Option<NumberOr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_r2_m: Option<NumberOr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_p_circ_w: Option<f64>,
}

/// Effective frequency and Q of a mode whose dynamics are set elsewhere,
/// e.g. by a trap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriteriaSection {
    pub f_eff_hz: f64,
    pub q_eff: f64,
}

/// The file exactly as written, before unit conversion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub oscillator: OscillatorSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cavity: Option<CavitySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub laser: Option<LaserSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub environment: Option<EnvironmentSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suspension: Option<SuspensionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion: Option<TorsionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levitation: Option<LevitationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criteria: Option<CriteriaSection>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LaserPower {
    /// Input power, W; circulating power follows from the cavity.
    Input(f64),
    /// Circulating power, W.
    Circulating(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserConfig {
    pub drive: LaserDrive,
    pub power: LaserPower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuspensionConfig {
    pub material: WireMaterial,
    pub intrinsic: IntrinsicLoss,
    pub radius: Option<f64>,
    pub length: Option<f64>,
    pub wires: u32,
    pub safety_factor: f64,
    pub bond_loss: f64,
    pub thermoelastic_nulled: bool,
}

impl SuspensionConfig {
    /// The wire as specified. Needs both `r_w_m` and `l_w_m`.
    pub fn suspension(&self) -> Result<Suspension> {
        let (Some(r), Some(l)) = (self.radius, self.length) else {
            return Err(Error::Config("[suspension] needs r_w_m and l_w_m".into()));
        };
        let mut s = Suspension::new(self.material, self.intrinsic, r, l, self.wires)?
            .with_safety_factor(self.safety_factor)?
            .with_bond_loss(self.bond_loss)?;
        s.thermoelastic_nulled = self.thermoelastic_nulled;
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevitationConfig {
    pub enabled: bool,
    pub convex_downward: bool,
    pub upper: Option<(OpticalCavity, f64)>,
}

/// Validated system with SI units and angular frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub file: ConfigFile,
    pub oscillator: MechanicalOscillator,
    pub cavity: Option<OpticalCavity>,
    pub laser: Option<LaserConfig>,
    pub environment: Option<Environment>,
    pub suspension: Option<SuspensionConfig>,
    pub torsion: Option<TorsionBar>,
    pub levitation: Option<LevitationConfig>,
    /// `(f_eff, Q_eff)` with `f_eff` in Hz.
    pub effective_fq: Option<(f64, f64)>,
    /// Defaults that were filled in, one human-readable line each.
    pub assumptions: Vec<String>,
}

/// Parse and validate a configuration.
pub fn parse_config(text: &str) -> Result<SystemConfig> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
    build(file, Some(text))
}

pub fn load_config(path: &Path) -> Result<SystemConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

impl SystemConfig {
    pub fn from_file(file: ConfigFile) -> Result<Self> {
        build(file, None)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(&self.file).map_err(|e| Error::Internal(format!("config serialization failed: {e}")))
    }

    pub fn require_cavity(&self) -> Result<OpticalCavity> {
        self.cavity.ok_or_else(|| Error::Config("missing required section [cavity]".into()))
    }

    pub fn require_laser(&self) -> Result<LaserConfig> {
        self.laser.ok_or_else(|| Error::Config("missing required section [laser]".into()))
    }

    pub fn require_suspension(&self) -> Result<SuspensionConfig> {
        self.suspension.ok_or_else(|| Error::Config("missing required section [suspension]".into()))
    }

    pub fn require_torsion(&self) -> Result<TorsionBar> {
        self.torsion.ok_or_else(|| Error::Config("missing required section [torsion]".into()))
    }

    /// Oscillator, cavity and laser combined.
    pub fn coupled_system(&self) -> Result<crate::coupling::CoupledSystem> {
        use crate::coupling::CoupledSystem;
        let cav = self.require_cavity()?;
        let laser = self.require_laser()?;
        Ok(match laser.power {
            LaserPower::Input(_) => CoupledSystem::from_drive(self.oscillator, cav, laser.drive),
            LaserPower::Circulating(p) => CoupledSystem::with_circulating_power(self.oscillator, cav, laser.drive, p)?,
        })
    }
}

enum Choice<T> {
    First(T),
    Second(T),
}

/// Finds `key` inside `[section]` to report a line number.
struct Locator<'a> {
    text: Option<&'a str>,
}

impl Locator<'_> {
    fn at(&self, section: &str, key: &str) -> String {
        let line = self.text.and_then(|text| {
            let mut current = "";
            for (i, raw) in text.lines().enumerate() {
                let l = raw.trim();
                if let Some(h) = l.strip_prefix('[').and_then(|h| h.strip_suffix(']')) {
                    current = h.trim();
                } else if current == section && l.split('=').next().map(str::trim) == Some(key) {
                    return Some(i + 1);
                }
            }
            None
        });
        match line {
            Some(n) => format!("line {n}, [{section}] {key}"),
            None => format!("[{section}] {key}"),
        }
    }

    fn fail(&self, section: &str, key: &str, reason: impl std::fmt::Display) -> Error {
        Error::Config(format!("{}: {reason}", self.at(section, key)))
    }

    fn positive(&self, section: &str, key: &str, v: f64) -> Result<f64> {
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(self.fail(section, key, format!("must be finite and > 0, got {v}")))
        }
    }

    fn non_negative(&self, section: &str, key: &str, v: f64) -> Result<f64> {
        if v.is_finite() && v >= 0.0 {
            Ok(v)
        } else {
            Err(self.fail(section, key, format!("must be finite and >= 0, got {v}")))
        }
    }

    fn fraction(&self, section: &str, key: &str, v: f64) -> Result<f64> {
        if v > 0.0 && v <= 1.0 {
            Ok(v)
        } else {
            Err(self.fail(section, key, format!("must lie in (0, 1], got {v}")))
        }
    }

    fn curvature(&self, section: &str, key: &str, v: &Option<NumberOr>) -> Result<Curvature> {
        match v {
            None => Ok(Curvature::Flat),
            Some(NumberOr::Keyword(k)) if k == "flat" => Ok(Curvature::Flat),
            Some(NumberOr::Keyword(k)) => Err(self.fail(section, key, format!("expected a radius in m or \"flat\", got \"{k}\""))),
            Some(NumberOr::Number(r)) if r.is_finite() && *r != 0.0 => Ok(Curvature::Radius(*r)),
            Some(NumberOr::Number(r)) => Err(self.fail(section, key, format!("radius must be finite and nonzero, got {r}"))),
        }
    }

    fn exclusive<T>(&self, section: &str, a: (&str, Option<T>), b: (&str, Option<T>)) -> Result<Option<Choice<T>>> {
        match (a.1, b.1) {
            (Some(_), Some(_)) => Err(self.fail(
                section,
                b.0,
                format!("`{}` and `{}` are mutually exclusive", a.0, b.0),
            )),
            (Some(x), None) => Ok(Some(Choice::First(x))),
            (None, Some(y)) => Ok(Some(Choice::Second(y))),
            (None, None) => Ok(None),
        }
    }
}

fn build(file: ConfigFile, text: Option<&str>) -> Result<SystemConfig> {
    let loc = Locator { text };
    let mut assumptions = Vec::new();

    let o = &file.oscillator;
    let oscillator = MechanicalOscillator::new(
        loc.positive("oscillator", "mass_kg", o.mass_kg)?,
        hz_to_rad(loc.positive("oscillator", "f_m_hz", o.f_m_hz)?),
        loc.positive("oscillator", "q", o.q)?,
        o.damping.into(),
        loc.non_negative("oscillator", "temperature_k", o.temperature_k)?,
    )?;

    let cavity = match &file.cavity {
        None => None,
        Some(c) => {
            let s = "cavity";
            let length = loc.positive(s, "length_m", c.length_m)?;
            let r1 = loc.curvature(s, "r1_m", &c.r1_m)?;
            let r2 = loc.curvature(s, "r2_m", &c.r2_m)?;
            for (key, v) in [("r1_m", &c.r1_m), ("r2_m", &c.r2_m)] {
                if v.is_none() {
                    assumptions.push(format!("cavity {key} = flat (default)"));
                }
            }
            let cav = match loc.exclusive(s, ("finesse", c.finesse), ("t_in", c.t_in))? {
                Some(Choice::First(f)) => {
                    if c.extra_loss.is_some() {
                        return Err(loc.fail(s, "extra_loss", "only valid together with `t_in`; use `coupling_ratio` with `finesse`"));
                    }
                    let ratio = match c.coupling_ratio {
                        Some(r) => loc.fraction(s, "coupling_ratio", r)?,
                        None => {
                            assumptions.push("cavity coupling_ratio = 1 (lossless apart from the input mirror)".into());
                            1.0
                        }
                    };
                    let f = loc.positive(s, "finesse", f)?;
                    if f < 2.0 * PI * ratio {
                        return Err(loc.fail(s, "finesse", format!("{f} needs an input transmission above 1 (minimum 2 pi coupling_ratio)")));
                    }
                    OpticalCavity::from_finesse(length, f, ratio, r1, r2)?
                }
                Some(Choice::Second(t)) => {
                    if c.coupling_ratio.is_some() {
                        return Err(loc.fail(s, "coupling_ratio", "only valid together with `finesse`"));
                    }
                    let loss = loc.non_negative(s, "extra_loss", c.extra_loss.unwrap_or(0.0))?;
                    OpticalCavity::new(length, loc.fraction(s, "t_in", t)?, loss, r1, r2)?
                }
                None => return Err(loc.fail(s, "finesse", "one of `finesse` or `t_in` is required")),
            };
            Some(cav)
        }
    };

    let laser = match &file.laser {
        None => None,
        Some(l) => {
            let s = "laser";
            let power = match loc.exclusive(s, ("power_in_w", l.power_in_w), ("p_circ_w", l.p_circ_w))? {
                Some(Choice::First(p)) => LaserPower::Input(loc.non_negative(s, "power_in_w", p)?),
                Some(Choice::Second(p)) => LaserPower::Circulating(loc.non_negative(s, "p_circ_w", p)?),
                None => return Err(loc.fail(s, "power_in_w", "one of `power_in_w` or `p_circ_w` is required")),
            };
            let detuning = l.detuning_hz.unwrap_or(0.0);
            if !detuning.is_finite() {
                return Err(loc.fail(s, "detuning_hz", "must be finite"));
            }
            let efficiency = loc.fraction(s, "efficiency", l.efficiency.unwrap_or(1.0))?;
            if l.efficiency.is_none() {
                assumptions.push("laser efficiency = 1 (default)".into());
            }
            let drive = LaserDrive::new(
                loc.positive(s, "wavelength_m", l.wavelength_m)?,
                match power {
                    LaserPower::Input(p) => p,
                    LaserPower::Circulating(_) => 0.0,
                },
                hz_to_rad(detuning),
                efficiency,
            )?;
            Some(LaserConfig { drive, power })
        }
    };
    if laser.is_some() && cavity.is_none() {
        return Err(Error::Config("[laser] requires a [cavity] section".into()));
    }

    let environment = match &file.environment {
        None => None,
        Some(e) => {
            let s = "environment";
            let pressure = loc.non_negative(s, "pressure_pa", e.pressure_pa)?;
            let gas_name = e.gas.as_deref().unwrap_or("helium");
            let gas = Gas::from_name(gas_name).ok_or_else(|| {
                loc.fail(s, "gas", format!("unknown gas \"{gas_name}\" (hydrogen, helium, nitrogen, argon, air)"))
            })?;
            if e.gas.is_none() {
                assumptions.push("environment gas = helium (default)".into());
            }
            let shape = loc.positive(s, "shape_c", e.shape_c.unwrap_or(1.0))?;
            if e.shape_c.is_none() {
                assumptions.push("environment shape constant C = 1 (default)".into());
            }
            let area = match &e.area_m2 {
                Some(NumberOr::Number(a)) => loc.positive(s, "area_m2", *a)?,
                Some(NumberOr::Keyword(k)) if k != "auto" => {
                    return Err(loc.fail(s, "area_m2", format!("expected an area in m^2 or \"auto\", got \"{k}\"")))
                }
                _ => {
                    let d = e
                        .disk_diameter_m
                        .ok_or_else(|| loc.fail(s, "disk_diameter_m", "required when area_m2 is \"auto\" or absent"))?;
                    let d = loc.positive(s, "disk_diameter_m", d)?;
                    let t = match e.disk_thickness_m {
                        Some(t) => loc.non_negative(s, "disk_thickness_m", t)?,
                        None => {
                            let t = oscillator.mass / (DEFAULT_DISK_DENSITY * PI * d * d / 4.0);
                            assumptions.push(format!(
                                "environment disk thickness = {t:.4e} m from the mass at density {DEFAULT_DISK_DENSITY} kg/m^3"
                            ));
                            t
                        }
                    };
                    let a = disk_area(d, t)?;
                    assumptions.push(format!("environment area A = {a:.4e} m^2 (full disk surface)"));
                    a
                }
            };
            Some(Environment::new(pressure, gas.molecule_mass(), shape, area)?)
        }
    };

    let suspension = match &file.suspension {
        None => None,
        Some(w) => {
            let s = "suspension";
            let material = WireMaterial::preset(&w.material).ok_or_else(|| {
                loc.fail(s, "material", format!("unknown material \"{}\" (fused_silica, tungsten, carbon_fiber)", w.material))
            })?;
            let intrinsic = match loc.exclusive(s, ("q_el", w.q_el), ("q_el_per_m_radius", w.q_el_per_m_radius))? {
                Some(Choice::First(q)) => IntrinsicLoss::Constant(loc.positive(s, "q_el", q)?),
                Some(Choice::Second(q)) => IntrinsicLoss::SurfaceLoss {
                    q_per_radius: loc.positive(s, "q_el_per_m_radius", q)?,
                },
                None => return Err(loc.fail(s, "q_el", "one of `q_el` or `q_el_per_m_radius` is required")),
            };
            let wires = w.n_w.unwrap_or(1);
            if wires == 0 {
                return Err(loc.fail(s, "n_w", "must be at least 1"));
            }
            let safety_factor = w.s_w.unwrap_or(DEFAULT_SAFETY_FACTOR);
            if !(safety_factor.is_finite() && safety_factor >= 1.0) {
                return Err(loc.fail(s, "s_w", format!("must be >= 1, got {safety_factor}")));
            }
            if w.n_w.is_none() {
                assumptions.push("suspension wires n_w = 1 (default)".into());
            }
            if w.s_w.is_none() {
                assumptions.push(format!("suspension safety factor s_w = {DEFAULT_SAFETY_FACTOR} (default)"));
            }
            Some(SuspensionConfig {
                material,
                intrinsic,
                radius: w.r_w_m.map(|r| loc.positive(s, "r_w_m", r)).transpose()?,
                length: w.l_w_m.map(|l| loc.positive(s, "l_w_m", l)).transpose()?,
                wires,
                safety_factor,
                bond_loss: loc.non_negative(s, "bond_loss", w.bond_loss.unwrap_or(0.0))?,
                thermoelastic_nulled: w.thermoelastic_nulled.unwrap_or(false),
            })
        }
    };

    let torsion = match &file.torsion {
        None => None,
        Some(t) => {
            let d = loc.positive("torsion", "d_m", t.d_m)?;
            let a = t.a.unwrap_or(UNIFORM_BAR);
            if t.a.is_none() {
                assumptions.push("torsion mass distribution a = 1/12 (uniform bar, default)".into());
            }
            Some(TorsionBar::new(oscillator.mass, d, a).map_err(|e| loc.fail("torsion", "a", e))?)
        }
    };

    let levitation = match &file.levitation {
        None => None,
        Some(v) => {
            let s = "levitation";
            let upper = match (v.upper_length_m, v.upper_p_circ_w) {
                (None, None) => None,
                (Some(len), Some(p)) => {
                    let f = v
                        .upper_finesse
                        .ok_or_else(|| loc.fail(s, "upper_finesse", "required with an upper cavity"))?;
                    let cav = OpticalCavity::from_finesse(
                        loc.positive(s, "upper_length_m", len)?,
                        loc.positive(s, "upper_finesse", f)?,
                        1.0,
                        loc.curvature(s, "upper_r1_m", &v.upper_r1_m)?,
                        loc.curvature(s, "upper_r2_m", &v.upper_r2_m)?,
                    )?;
                    Some((cav, loc.non_negative(s, "upper_p_circ_w", p)?))
                }
                (Some(_), None) => return Err(loc.fail(s, "upper_p_circ_w", "required with `upper_length_m`")),
                (None, Some(_)) => return Err(loc.fail(s, "upper_length_m", "required with `upper_p_circ_w`")),
            };
            Some(LevitationConfig {
                enabled: v.enabled,
                convex_downward: v.convex_downward.unwrap_or(true),
                upper,
            })
        }
    };

    let effective_fq = match &file.criteria {
        None => None,
        Some(c) => Some((
            loc.positive("criteria", "f_eff_hz", c.f_eff_hz)?,
            loc.positive("criteria", "q_eff", c.q_eff)?,
        )),
    };

    Ok(SystemConfig {
        file,
        oscillator,
        cavity,
        laser,
        environment,
        suspension,
        torsion,
        levitation,
        effective_fq,
        assumptions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[oscillator]
mass_kg = 1e-6
f_m_hz = 1.0
q = 1e5
temperature_k = 300.0

[cavity]
length_m = 0.1
finesse = 100.0

[laser]
wavelength_m = 1064e-9
p_circ_w = 1.0
"#;

    fn err(text: &str) -> String {
        parse_config(text).unwrap_err().to_string()
    }

    #[test]
    fn minimal_config_converts_units() {
        let c = parse_config(MINIMAL).unwrap();
        assert!((c.oscillator.omega_m - 2.0 * PI).abs() < 1e-15);
        assert_eq!(c.oscillator.damping, DampingModel::Viscous);
        assert_eq!(c.laser.unwrap().power, LaserPower::Circulating(1.0));
        let cav = c.cavity.unwrap();
        assert!((cav.input_transmission - 2.0 * PI / 100.0).abs() < 1e-15);
        assert_eq!(cav.extra_loss, 0.0);
        assert!(c.assumptions.iter().any(|a| a.contains("coupling_ratio")));
    }

    #[test]
    fn both_powers_are_rejected() {
        let text = MINIMAL.replace("p_circ_w = 1.0", "p_circ_w = 1.0\npower_in_w = 0.1");
        let e = err(&text);
        assert!(e.contains("mutually exclusive"), "{e}");
        assert!(e.contains("[laser]") && e.contains("line"), "{e}");
    }

    #[test]
    fn unknown_key_reports_location() {
        let e = err(&MINIMAL.replace("q = 1e5", "q = 1e5\nqq = 3"));
        assert!(e.contains("qq") && e.contains("line 6"), "{e}");
    }

    #[test]
    fn missing_section_and_bad_units() {
        assert!(err("[cavity]\nlength_m = 0.1\nfinesse = 10\n").contains("oscillator"));
        let e = err(&MINIMAL.replace("mass_kg = 1e-6", "mass_kg = -1e-6"));
        assert!(e.contains("line 3, [oscillator] mass_kg"), "{e}");
        assert!(err(&MINIMAL.replace("finesse = 100.0", "")).contains("finesse"));
        let e = err(&MINIMAL.replace("finesse = 100.0", "finesse = 3.0"));
        assert!(e.contains("[cavity] finesse") && e.contains("input transmission"), "{e}");
        assert!(err(&MINIMAL.replace("temperature_k = 300.0", "temperature_k = 300.0\ndamping = \"sticky\"")).contains("sticky"));
    }

    #[test]
    fn round_trip() {
        let a = parse_config(MINIMAL).unwrap();
        let b = parse_config(&a.to_toml().unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn keywords_and_defaults() {
        let text = format!(
            "{MINIMAL}\n[cavity2]\n"
        );
        assert!(parse_config(&text).is_err());
        let text = MINIMAL.replace("finesse = 100.0", "finesse = 100.0\nr1_m = \"flat\"\nr2_m = 0.2");
        let c = parse_config(&text).unwrap().cavity.unwrap();
        assert_eq!(c.r1, Curvature::Flat);
        assert_eq!(c.r2, Curvature::Radius(0.2));
        assert!(err(&MINIMAL.replace("finesse = 100.0", "finesse = 100.0\nr1_m = \"round\"")).contains("round"));
        let env = format!("{MINIMAL}\n[environment]\npressure_pa = 1e-5\ndisk_diameter_m = 2e-3\n");
        let c = parse_config(&env).unwrap();
        let e = c.environment.unwrap();
        assert_eq!(e.shape_constant, 1.0);
        assert!(e.area > 2.0 * PI * 1e-6);
        assert!(c.assumptions.iter().any(|a| a.contains("helium")));
    }
}
