//! Command-line front end. Each `cmd_*` function does the work of one
//! subcommand and returns its text report, so the commands can be driven
//! from tests without a process boundary.
//!
//! Reports are `key: value` lines. Derived quantities carry the formula
//! they come from in brackets after the value.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::cavity::cavity_response;
use crate::config::{load_config, LaserPower, SystemConfig};
use crate::coupling::{
    coupling_strength_squared_from_photons, coupling_strength_squared_from_power, effective_dynamics,
    optical_spring_full, CoupledSystem,
};
use crate::criteria::{evaluate_criteria, fq_criterion_effective, FqCriterion};
use crate::error::{Error, Result};
use crate::langevin::{psd_estimate, simulate, write_psd_csv, write_trajectory_csv, SimConfig};
use crate::levitation::{
    finesse_advisory, levitation_power, levitation_sql_frequency, sandwich_stability_check, Sandwich,
};
use crate::mechanics::{thermal_force_psd, zero_point_fluctuation};
use crate::model::{rad_to_hz, FrequencyGrid, K_B};
use crate::quantum_noise::{build_budget, sql_touching_frequency, Mechanism, NoiseBudget, QuantumNoiseInput, ReducedMass};
use crate::suspension::{
    gas_damping, max_q_design, pendulum_springs, tensile_limited_q, tensile_status, total_pendulum_damping,
    BindingConstraint, DesignConstraints,
};
use crate::torsion::{common_mode_rejection_requirement, damping_ratio, torsion_frequency, torsion_spring};

#[derive(Debug, Parser)]
#[command(name = "optomech", version, about = "Optomechanical noise budgets and design checks")]
pub struct Cli {
    /// System description (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Suppress the summary printed to standard error.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Displacement and force noise budget as CSV.
    Budget(BudgetArgs),
    /// Quantum-regime criteria report.
    Criteria,
    /// Maximum-Q pendulum suspension.
    DesignPendulum(DesignArgs),
    /// Torsion versus pendulum damping.
    CompareTorsion,
    /// Radiation-pressure levitation numbers and trap signs.
    LevitationCheck,
    /// Langevin trajectory as CSV.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = 1.0)]
    pub f_min_hz: f64,
    #[arg(long, default_value_t = 1e4)]
    pub f_max_hz: f64,
    /// Log-spaced grid points.
    #[arg(long, default_value_t = 500)]
    pub points: usize,
    /// Write the shot-noise columns as zero.
    #[arg(long)]
    pub no_shot: bool,
    #[arg(long)]
    pub no_rad: bool,
    #[arg(long)]
    pub no_thermal: bool,
}

impl Default for BudgetArgs {
    fn default() -> Self {
        Self {
            f_min_hz: 1.0,
            f_max_hz: 1e4,
            points: 500,
            no_shot: false,
            no_rad: false,
            no_thermal: false,
        }
    }
}

impl BudgetArgs {
    pub fn mechanisms(&self) -> Vec<Mechanism> {
        let off = [self.no_shot, self.no_rad, self.no_thermal];
        Mechanism::ALL.into_iter().zip(off).filter(|(_, o)| !o).map(|(m, _)| m).collect()
    }
}

#[derive(Debug, Clone, Args)]
pub struct DesignArgs {
    /// Lowest acceptable violin-mode frequency.
    #[arg(long)]
    pub f_v_min_hz: f64,
    /// Thinnest wire that can be made.
    #[arg(long)]
    pub r_min_m: Option<f64>,
    #[arg(long)]
    pub r_max_m: Option<f64>,
    /// Longest wire that fits.
    #[arg(long)]
    pub l_max_m: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Time step, s.
    #[arg(long)]
    pub dt: f64,
    /// Record length, s.
    #[arg(long)]
    pub duration: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Velocity feedback rate, s⁻¹.
    #[arg(long, default_value_t = 0.0)]
    pub feedback_gain: f64,
    /// Initial displacement.
    #[arg(long, default_value_t = 0.0)]
    pub x0_m: f64,
    #[arg(long, default_value_t = 0.0)]
    pub v0_m_s: f64,
    /// Also write a Welch PSD of x to this file.
    #[arg(long)]
    pub psd_out: Option<PathBuf>,
    /// Welch segments for --psd-out.
    #[arg(long, default_value_t = 16)]
    pub segments: usize,
}

/// Ordered `key: value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn value(&mut self, key: &str, value: impl fmt::Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn number(&mut self, key: &str, value: f64) {
        self.value(key, sci(value));
    }

    /// A derived number with its formula.
    pub fn derived(&mut self, key: &str, value: f64, formula: &str) {
        self.value(key, format!("{}  [{formula}]", sci(value)));
    }

    pub fn verdict(&mut self, key: &str, pass: bool) {
        self.value(key, if pass { "PASS" } else { "FAIL" });
    }

    pub fn assumptions(&mut self, cfg: &SystemConfig) {
        for a in &cfg.assumptions {
            self.value("assumption", a);
        }
    }

    /// Value of the first line with this key, without the formula.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.split("  [").next().unwrap_or(v).trim())
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.get(key)?.parse().ok()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.lines {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

/// Scientific notation with seven significant digits.
pub fn sci(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6e}")
    } else {
        format!("{v}")
    }
}

fn open_out(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Budget as CSV, amplitude spectral densities. Mechanisms left out of the
/// budget are written as zero.
pub fn write_budget_csv<W: Write>(budget: &NoiseBudget, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let csv_err = |e: csv::Error| Error::Output(e.into());
    w.write_record([
        "f_hz",
        "shot_asd_m",
        "rad_asd_m",
        "thermal_asd_m",
        "total_asd_m",
        "shot_asd_n",
        "rad_asd_n",
        "thermal_asd_n",
        "total_asd_n",
    ])
    .map_err(csv_err)?;
    let cols: Vec<Option<_>> = Mechanism::ALL.iter().map(|&m| budget.column(m)).collect();
    for (i, &omega) in budget.grid.points().iter().enumerate() {
        let mut row = vec![sci(rad_to_hz(omega))];
        for force in [false, true] {
            for c in &cols {
                let psd = c.map_or(0.0, |c| if force { c.force[i] } else { c.displacement[i] });
                row.push(sci(psd.sqrt()));
            }
            let total = if force { budget.total.force[i] } else { budget.total.displacement[i] };
            row.push(sci(total.sqrt()));
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(Error::Output)
}

/// Budget over a log-spaced grid, plus a summary report.
pub fn cmd_budget(cfg: &SystemConfig, args: &BudgetArgs) -> Result<(NoiseBudget, Report)> {
    let sys = cfg.coupled_system()?;
    let grid = FrequencyGrid::log_spaced_hz(args.f_min_hz, args.f_max_hz, args.points)?;
    let budget = build_budget(&sys, &grid, &args.mechanisms())?;
    let mut r = Report::default();
    r.value("mechanisms", args.mechanisms().iter().map(|m| m.name()).collect::<Vec<_>>().join(","));
    r.value("points", grid.len());
    r.derived(
        "sql_frequency_hz",
        rad_to_hz(budget.metadata.sql.omega),
        "omega_SQL = sqrt(4 hbar G^2 n / (M kappa))",
    );
    r.value("free_mass_regime", budget.metadata.sql.free_mass_regime);
    if budget.metadata.detuning_approximated {
        r.value("warning", "detuned system: quantum noise evaluated on resonance");
    }
    if let (Some(shot), Some(rad)) = (budget.column(Mechanism::Shot), budget.column(Mechanism::RadiationPressure)) {
        if let Some(f) = crossing_hz(grid.points(), &shot.displacement, &rad.displacement) {
            r.number("shot_rad_crossing_hz", f);
        }
    }
    r.assumptions(cfg);
    Ok((budget, r))
}

/// Frequency where `b - a` changes sign, log-interpolated.
fn crossing_hz(omega: &[f64], a: &[f64], b: &[f64]) -> Option<f64> {
    let d: Vec<f64> = a.iter().zip(b).map(|(a, b)| (a / b).ln()).collect();
    (1..d.len()).find(|&i| d[i - 1].signum() != d[i].signum()).map(|i| {
        let t = d[i - 1] / (d[i - 1] - d[i]);
        rad_to_hz((omega[i - 1].ln() + t * (omega[i].ln() - omega[i - 1].ln())).exp())
    })
}

fn fq_lines(r: &mut Report, fq: &FqCriterion, formula: &str) {
    r.derived("fq_product_hz", fq.product, formula);
    r.derived("fq_threshold_hz", fq.threshold, "k_B T / h (omega_m/omega_eff)^alpha");
    r.value("fq_alpha", fq.alpha);
    r.derived("fq_margin", fq.margin, "f Q / threshold");
    r.verdict("fq_verdict", fq.pass);
}

pub fn cmd_criteria(cfg: &SystemConfig) -> Result<Report> {
    let sys = cfg.coupled_system()?;
    let osc = sys.osc;
    let mut r = Report::default();
    r.value("damping_model", osc.damping);
    r.number("temperature_k", osc.temperature);
    r.derived("circulating_power_w", sys.circulating_power, "P_circ = (2F/pi)(kappa_in/kappa) P_in / (1 + (Delta/kappa)^2)");
    r.derived("kappa_rad_s", sys.kappa(), "kappa = T c / (4 L)");
    r.derived("photon_number", sys.photon_number(), "n = (2L/c) P_circ / (hbar omega_L)");
    r.derived("g_squared_power", coupling_strength_squared_from_power(&sys), "g^2 = P omega_L / (m L c omega_m)");
    r.derived("g_squared_photons", coupling_strength_squared_from_photons(&sys), "g^2 = (G x_zpf)^2 n");
    r.derived("x_zpf_m", zero_point_fluctuation(&osc), "x_zpf = sqrt(hbar / (2 m omega_m))");

    let springs = if sys.drive.detuning != 0.0 {
        vec![optical_spring_full(&sys, sys.drive.detuning)?]
    } else {
        Vec::new()
    };
    let eff = effective_dynamics(&osc, &springs);
    r.derived("f_eff_hz", rad_to_hz(eff.omega_eff), "omega_m + delta omega_opt");
    r.derived("gamma_eff_rad_s", eff.gamma_eff, "gamma_m + gamma_opt");
    r.value("dynamically_stable", eff.stable);

    // a softened mode is judged at its bare frequency
    let rep = if eff.omega_eff >= osc.omega_m {
        evaluate_criteria(&sys, &eff)?
    } else {
        r.value("note", "optical spring softens the mode; f.Q taken at omega_m");
        let mut rep = evaluate_criteria(&sys, &effective_dynamics(&osc, &[]))?;
        rep.occupancy = crate::criteria::effective_occupancy(&osc, &eff)?;
        rep
    };
    let c = rep.cooperativity;
    r.derived("cooperativity", c.c, "C = 2 g^2 / (gamma_m kappa)");
    r.derived("thermal_occupancy", osc.thermal_occupancy(), "n_th = k_B T / (hbar omega_m)");
    r.derived("quantum_cooperativity", c.c_qu, "C_qu = C / n_th");
    r.value("quantum_cooperativity_unbounded", c.unbounded);
    r.verdict("quantum_cooperativity_verdict", rep.verdicts.quantum_cooperativity);
    r.derived("measurement_rate_s", rep.measurement_rate, "Gamma_meas = x_zpf^2 / (2 S_imp)");
    r.derived("decoherence_rate_s", rep.decoherence_rate, "Gamma_th = k_B T / (hbar Q)");
    r.verdict("measurement_rate_verdict", rep.verdicts.measurement_rate);
    match cfg.effective_fq {
        Some((f, q)) => {
            r.value("fq_source", "[criteria] f_eff_hz, q_eff");
            fq_lines(&mut r, &fq_criterion_effective(f, q, osc.temperature), "f_eff Q_eff");
        }
        None => fq_lines(&mut r, &rep.fq, "f_m Q_m"),
    }
    r.derived("effective_occupancy", rep.occupancy.n_eff, "n_eff = k_B T/(hbar omega_eff) gamma_m/(gamma_m + gamma_opt)");
    r.value("overdamped", rep.occupancy.overdamped);
    let q = QuantumNoiseInput::from_system(&sys, ReducedMass::SingleMirror)?;
    let sql = sql_touching_frequency(&q);
    r.derived("sql_frequency_hz", rad_to_hz(sql.omega), "omega_SQL = sqrt(4 hbar G^2 n / (M kappa))");
    r.value("free_mass_regime", sql.free_mass_regime);
    r.derived(
        "thermal_force_asd_n",
        thermal_force_psd(&osc, osc.omega_m)?.sqrt(),
        "sqrt(4 k_B T m gamma_m)",
    );
    r.assumptions(cfg);
    Ok(r)
}

pub fn cmd_design_pendulum(cfg: &SystemConfig, args: &DesignArgs) -> Result<Report> {
    let s = cfg.require_suspension()?;
    let m = cfg.oscillator.mass;
    let mut c = DesignConstraints::new(args.f_v_min_hz);
    c.safety_factor = s.safety_factor;
    c.wires = s.wires;
    if let Some(v) = args.r_min_m {
        c.r_min = v;
    }
    if let Some(v) = args.r_max_m {
        c.r_max = v;
    }
    if let Some(v) = args.l_max_m {
        c.l_max = v;
    }
    let d = max_q_design(m, &s.material, s.intrinsic, &c)?;
    let w = &d.suspension;
    let mut r = Report::default();
    r.value("material", s.material.name);
    r.number("mass_kg", m);
    r.value("wires", s.wires);
    r.number("safety_factor", s.safety_factor);
    r.number("f_v_min_hz", c.f_v_min_hz);
    r.derived("radius_m", w.radius, "r = sqrt(s m g / (n pi H))");
    r.value("radius_limit", d.radius_limit.name());
    r.derived("length_m", w.length, "f_v = (1/2l) sqrt(T / (rho pi r^2))");
    r.value("length_limit", d.length_limit.name());
    r.number("violin_frequency_hz", d.violin_frequency);
    r.derived("pendulum_frequency_hz", rad_to_hz(d.springs.omega(m)), "sqrt((k_grav + k_el)/m)");
    r.derived("k_grav_n_m", d.springs.k_grav, "m g / l");
    r.derived("k_el_n_m", d.springs.k_el, "n sqrt(T E I) / (2 l^2)");
    r.derived("dilution", d.springs.dilution, "Lambda = (4l/r^2) sqrt(m g / (pi n E))");
    r.number("q_el", w.q_el());
    r.derived("pendulum_q", d.q(), "Q = Lambda Q_el");
    if d.radius_limit == BindingConstraint::Tensile && d.length_limit == BindingConstraint::Violin && s.wires == 1 {
        r.derived(
            "pendulum_q_tensile_form",
            tensile_limited_q(&s.material, w.q_el(), s.safety_factor, d.violin_frequency, w.radius),
            "Q = (2H/(s f_v)) sqrt(1/(rho E)) Q_el / r",
        );
    }
    r.number("tensile_utilization", d.springs.tensile.utilization);
    if let Some(env) = &cfg.environment {
        let omega = d.springs.omega(m);
        let mut susp = *w;
        susp.bond_loss = s.bond_loss;
        susp.thermoelastic_nulled = s.thermoelastic_nulled;
        let b = total_pendulum_damping(m, &susp, env, cfg.oscillator.temperature, omega)?;
        r.number("bond_loss", s.bond_loss);
        r.derived("thermoelastic_loss", b.thermoelastic_loss, "Delta omega tau / (1 + (omega tau)^2)");
        r.derived("diluted_loss", b.diluted_loss, "(phi_el + phi_bond + phi_te) / Lambda");
        r.derived("gas_damping_rate_s", b.gas_rate, "gamma = p A / (C m) sqrt(m_gas / (k_B T))");
        r.derived("total_damping_rate_s", b.total, "gamma_structure + gamma_gas");
        r.derived("total_q", omega / b.total, "omega / gamma");
    }
    r.assumptions(cfg);
    Ok(r)
}

pub fn cmd_compare_torsion(cfg: &SystemConfig) -> Result<Report> {
    let bar = cfg.require_torsion()?;
    let susp = cfg.require_suspension()?.suspension()?;
    let m = bar.mass;
    let mut r = Report::default();
    r.value("material", susp.material.name);
    r.number("mass_kg", m);
    r.number("bar_length_m", bar.length);
    r.number("distribution_a", bar.distribution);
    r.number("wire_radius_m", susp.radius);
    r.number("wire_length_m", susp.length);
    r.number("safety_factor", susp.safety_factor);
    r.derived("moment_of_inertia_kg_m2", bar.moment_of_inertia(), "I = a m d^2");
    let k = torsion_spring(&susp)?;
    r.derived("torsion_spring_n_m_rad", k.re, "K = pi E r^4 / (4 (1 + nu) l)");
    r.derived("torsion_loss_angle", k.im / k.re, "phi = 1/Q_el + phi_bond");
    r.derived("torsion_frequency_hz", rad_to_hz(torsion_frequency(&susp, &bar)?), "sqrt(K / I)");
    let ratio = damping_ratio(&bar, &susp)?;
    r.derived("damping_ratio", ratio.geometric, "gamma_tor/gamma_pend = l r^2/(a (1+nu) d^2) sqrt(pi E/(m g))");
    r.derived("damping_ratio_tensile_limit", ratio.tensile, "l s/(a (1+nu) H d^2) sqrt(m g E/pi)");
    r.derived(
        "common_mode_rejection",
        common_mode_rejection_requirement(ratio.geometric)?,
        "sqrt(gamma_tor/gamma_pend)",
    );
    let t = tensile_status(m, &susp);
    r.number("tensile_utilization", t.utilization);
    if t.utilization > 1.0 {
        r.value("warning", "wire is loaded beyond its tensile strength divided by the safety factor");
    }
    match pendulum_springs(m, &susp) {
        Ok(p) => {
            r.derived("pendulum_q", p.q_pendulum, "Q = Lambda Q_el");
            r.derived("torsion_q", k.re / k.im, "Q = 1/phi");
        }
        Err(e) => r.value("pendulum_q", format!("unavailable ({e})")),
    }
    r.assumptions(cfg);
    Ok(r)
}

pub fn cmd_levitation_check(cfg: &SystemConfig) -> Result<Report> {
    if let Some(l) = &cfg.levitation {
        if !l.enabled {
            return Err(Error::Config("[levitation] enabled = false".into()));
        }
    }
    let m = cfg.oscillator.mass;
    let cav = cfg.require_cavity()?;
    let laser = cfg.require_laser()?;
    let lambda = laser.drive.wavelength;
    let finesse = cavity_response(&cav).finesse;
    let p_lev = levitation_power(m)?;
    let mut r = Report::default();
    r.number("mass_kg", m);
    r.number("finesse", finesse);
    r.number("cavity_length_m", cav.length);
    r.derived("levitation_power_w", p_lev, "P = m g c / 2");
    let direct = levitation_sql_frequency(finesse, lambda)?;
    r.derived("sql_frequency_hz", rad_to_hz(direct), "omega_SQL = sqrt(16 F g / lambda)");
    let sys = CoupledSystem::with_circulating_power(cfg.oscillator, cav, laser.drive, p_lev)?;
    let q = QuantumNoiseInput::from_system(&sys, ReducedMass::SingleMirror)?;
    r.derived(
        "sql_frequency_general_hz",
        rad_to_hz(sql_touching_frequency(&q).omega),
        "sqrt(4 hbar G^2 n / (M kappa)) at P = m g c / 2",
    );
    let adv = finesse_advisory(finesse, cav.length, lambda)?;
    r.derived("finesse_bound", adv.bound, "F_max = (pi^2 c^2 lambda / (64 L^2 g))^(1/3)");
    r.number("finesse_ratio", adv.ratio);
    r.verdict("finesse_verdict", adv.comfortable);

    if let Some(env) = &cfg.environment {
        let t = cfg.oscillator.temperature;
        let gamma = gas_damping(m, env, t)?;
        r.derived("gas_damping_rate_s", gamma, "gamma = p A / (C m) sqrt(m_gas / (k_B T))");
        let q_gas = cfg.oscillator.omega_m / gamma;
        r.derived("gas_limited_q", q_gas, "omega_m / gamma");
        fq_lines(&mut r, &fq_criterion_effective(rad_to_hz(cfg.oscillator.omega_m), q_gas, t), "f_eff Q_gas");
    } else if let Some((f, q)) = cfg.effective_fq {
        fq_lines(&mut r, &fq_criterion_effective(f, q, cfg.oscillator.temperature), "f_eff Q_eff");
    }

    let lower_power = match laser.power {
        LaserPower::Circulating(p) => p,
        LaserPower::Input(_) => p_lev,
    };
    let lev = cfg.levitation.unwrap_or(crate::config::LevitationConfig {
        enabled: true,
        convex_downward: true,
        upper: None,
    });
    let rep = sandwich_stability_check(&Sandwich {
        mass: m,
        lower: cav,
        lower_power,
        upper: lev.upper,
        convex_downward: lev.convex_downward,
    })?;
    r.number("lower_power_w", lower_power);
    r.number("support_ratio", rep.support_ratio);
    r.verdict("vertical_spring", rep.vertical);
    r.verdict("rotation_restored", rep.rotational);
    r.verdict("horizontal_restored", rep.horizontal);
    r.verdict("weight_supported", rep.weight_supported);
    if let Some(k) = rep.net_stiffness {
        r.derived("net_angular_stiffness_n_m_rad", k, "sum of -(2 P L / c) g_2 / (1 - g_1 g_2)");
    }
    for n in &rep.notes {
        r.value("note", n);
    }
    r.verdict("trap_verdict", rep.all_pass());
    r.assumptions(cfg);
    Ok(r)
}

pub fn cmd_simulate(cfg: &SystemConfig, args: &SimulateArgs) -> Result<(crate::langevin::Trajectory, Report)> {
    let mut sc = SimConfig::new(cfg.oscillator, args.dt, args.duration, args.seed);
    sc.feedback_gain = args.feedback_gain;
    sc.initial = (args.x0_m, args.v0_m_s);
    let traj = simulate(&sc)?;
    let o = cfg.oscillator;
    let mut r = Report::default();
    r.value("seed", args.seed);
    r.value("samples", traj.len());
    r.number("dt_s", args.dt);
    r.number("feedback_gain_s", args.feedback_gain);
    r.number("variance_m2", traj.variance());
    r.derived(
        "expected_variance_m2",
        K_B * o.temperature / (o.mass * o.omega_m * o.omega_m) * o.damping_rate_at_resonance() / sc.gamma_eff(),
        "k_B T / (m omega_m^2) gamma_m / gamma_eff",
    );
    r.number("effective_temperature_k", traj.effective_temperature());
    if let Some(path) = &args.psd_out {
        let psd = psd_estimate(&traj, args.segments)?;
        write_psd_csv(&psd, open_out(path)?)?;
        r.value("psd_out", path.display());
    }
    Ok((traj, r))
}

fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => {
            let mut f = open_out(p)?;
            f.write_all(text.as_bytes())
                .and_then(|_| f.flush())
                .map_err(|source| Error::Io {
                    path: p.to_path_buf(),
                    source,
                })
        }
        None => io::stdout().write_all(text.as_bytes()).map_err(Error::Output),
    }
}

fn write_csv<F>(out: Option<&Path>, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match out {
        Some(p) => {
            let mut w = open_out(p)?;
            f(&mut w)
        }
        None => f(&mut io::stdout().lock()),
    }
}

/// Run a parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| Error::Config("--config PATH is required".into()))?;
    let cfg = load_config(path)?;
    let out = cli.out.as_deref();
    let summary = |r: &Report| {
        if !cli.quiet {
            eprint!("{r}");
        }
    };
    match &cli.command {
        Command::Budget(a) => {
            let (b, r) = cmd_budget(&cfg, a)?;
            write_csv(out, |w| write_budget_csv(&b, w))?;
            summary(&r);
        }
        Command::Simulate(a) => {
            let (t, r) = cmd_simulate(&cfg, a)?;
            write_csv(out, |w| write_trajectory_csv(&t, w))?;
            summary(&r);
        }
        Command::Criteria => write_text(out, &cmd_criteria(&cfg)?.to_string())?,
        Command::DesignPendulum(a) => write_text(out, &cmd_design_pendulum(&cfg, a)?.to_string())?,
        Command::CompareTorsion => write_text(out, &cmd_compare_torsion(&cfg)?.to_string())?,
        Command::LevitationCheck => write_text(out, &cmd_levitation_check(&cfg)?.to_string())?,
    }
    if let (Some(p), false) = (out, cli.quiet) {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}
