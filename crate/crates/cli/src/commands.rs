use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lattice_cft_core::fock::{
    annulus_sewing_check, bogoliubov_overlap, commutator_check, enumerated_character, positive_energy_check,
    sector_character, sector_spectrum, FockBasis, ModeTruncation,
};
use lattice_cft_core::heisenberg::{check_induced_decomposition, isotropic_subgroups, stone_von_neumann, Cocycle, HeisenbergGroup, Splitting};
use lattice_cft_core::lattice::gauss_sum;
use lattice_cft_core::linalg::{self, CMatrix};
use lattice_cft_core::modular::{
    block_dimension, genus1_mcg_rep, modular_data, random_split, verify_factorization, verlinde_check, Split,
};
use lattice_cft_core::surface::delta_obstruction;
use lattice_cft_core::theta::{
    heat_equation_residual, theta, theta_space_dimension, FiniteDifference, SiegelPoint, ThetaSpec,
};
use lattice_cft_core::Surface;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::accept::{self, AcceptConfig, Fault};
use crate::error::CliError;
use crate::formats::{self, complex_pair, rational_string, SurfaceDoc};
use crate::report::Outcome;

pub const DEFAULT_SEED: u64 = 0x1a77_1ce5;

#[derive(Clone, Debug, Parser, Serialize)]
#[command(name = "lattice-cft", version, about = "Abelian lattice conformal field theory at desk scale")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Override for the numerical tolerance of the command.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Discriminant group, forms and Gauss sum of an even lattice.
    Disc(LatticeArg),
    /// Conformal-block dimension of a labeled surface.
    Blocks(SurfaceArgs),
    /// Factorization along a given or random splits.
    Factorize(FactorizeArgs),
    /// S and T matrices and the genus-one relations.
    Modular(LatticeArg),
    /// Verlinde sum against the block dimension.
    Verlinde(SurfaceArgs),
    /// Theta function value, heat residual or space dimension.
    Theta(ThetaArgs),
    /// Loop-group sectors and Fock-space checks.
    Fock {
        #[command(subcommand)]
        command: FockCommand,
    },
    /// Stone–von Neumann and induced decompositions on a closed surface.
    Heisenberg(HeisenbergArgs),
    /// Run the acceptance suite.
    Accept(AcceptArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Disc(_) => "disc",
            Command::Blocks(_) => "blocks",
            Command::Factorize(_) => "factorize",
            Command::Modular(_) => "modular",
            Command::Verlinde(_) => "verlinde",
            Command::Theta(_) => "theta",
            Command::Fock { .. } => "fock",
            Command::Heisenberg(_) => "heisenberg",
            Command::Accept(_) => "accept",
        }
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct LatticeArg {
    /// Bundled name, inline Gram matrix JSON, or a path to one.
    #[arg(long)]
    pub lattice: String,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SurfaceArgs {
    #[arg(long, default_value = "A1")]
    pub lattice: String,
    /// Surface JSON (inline or path), optionally with labels.
    #[arg(long)]
    pub surface: String,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct FactorizeArgs {
    #[arg(long, default_value = "A1")]
    pub lattice: String,
    #[arg(long)]
    pub surface: String,
    /// Split JSON `{"first", "second", "matching"}`; random splits when absent.
    #[arg(long)]
    pub split: Option<String>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ThetaArgs {
    /// Period matrix: rows of complex entries (`x`, `[re, im]` or `{"re", "im"}`).
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long)]
    pub z: Option<String>,
    /// Characteristic `a,b`; vector entries separated by `:`.
    #[arg(long = "char")]
    pub characteristic: Option<String>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Also report the heat-equation residual at this step.
    #[arg(long)]
    pub heat_step: Option<f64>,
    /// Polarization type `d1,d2,…`: report the space dimension instead.
    #[arg(long)]
    pub polarization: Option<String>,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FockCommand {
    /// Sector character coefficients.
    Character {
        #[arg(long)]
        lattice: String,
        /// Element of the discriminant group, comma-separated coordinates.
        #[arg(long)]
        phi: Option<String>,
        #[arg(long, default_value_t = 10)]
        max_energy: u32,
    },
    /// Annulus sewing identity.
    Sewing {
        #[arg(long)]
        lattice: String,
        #[arg(long, default_value_t = 4)]
        max_energy: u32,
    },
    /// Bogoliubov vacuum overlap for a complex matrix T.
    Overlap {
        #[arg(long)]
        t: String,
    },
    /// Mode-operator commutators on the truncated Fock space.
    Modes {
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value_t = 3)]
        max_mode: u32,
        #[arg(long, default_value_t = 6)]
        max_energy: u32,
    },
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct HeisenbergArgs {
    #[arg(long)]
    pub lattice: String,
    #[arg(long, default_value_t = 1)]
    pub genus: u32,
    /// Also check the decomposition of every induced representation (genus 1).
    #[arg(long)]
    pub decompose: bool,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct AcceptArgs {
    #[arg(long = "inject-fault", hide = true, value_enum)]
    pub fault: Option<FaultArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaultArg {
    SSignFlip,
}

/// Inputs for the digest: the command line plus every loaded document.
fn inputs(config: &RunConfig, documents: Value) -> Value {
    json!({
        "command": serde_json::to_value(&config.command).expect("serializable"),
        "tolerance": config.tolerance,
        "documents": documents,
    })
}

fn tolerance(config: &RunConfig, default: f64) -> Result<f64, CliError> {
    match config.tolerance {
        Some(t) if !(t >= 0.0) => Err(CliError::invalid("tolerance must be nonnegative")),
        Some(t) => Ok(t),
        None => Ok(default),
    }
}

/// Executes a command; returns the digest inputs and the outcome.
pub fn execute(config: &RunConfig) -> Result<(Value, Outcome), CliError> {
    match &config.command {
        Command::Disc(a) => disc(config, a),
        Command::Blocks(a) => blocks(config, a),
        Command::Factorize(a) => factorize(config, a),
        Command::Modular(a) => modular(config, a),
        Command::Verlinde(a) => verlinde(config, a),
        Command::Theta(a) => theta_cmd(config, a),
        Command::Fock { command } => fock(config, command),
        Command::Heisenberg(a) => heisenberg(config, a),
        Command::Accept(a) => {
            let cfg = AcceptConfig {
                seed: config.seed,
                tolerance: config.tolerance,
                fault: a.fault.map(|f| match f {
                    FaultArg::SSignFlip => Fault::SSignFlip,
                }),
            };
            if let Some(t) = cfg.tolerance {
                if !(t >= 0.0) {
                    return Err(CliError::invalid("tolerance must be nonnegative"));
                }
            }
            let summary = accept::run(&cfg);
            let verified = summary.passed();
            Ok((inputs(config, Value::Null), Outcome { results: serde_json::to_value(&summary)?, verified }))
        }
    }
}

fn disc(config: &RunConfig, a: &LatticeArg) -> Result<(Value, Outcome), CliError> {
    let (doc, lat, disc) = formats::load_lattice(&a.lattice)?;
    let g = gauss_sum(&disc);
    let bilinear: Vec<Vec<String>> = disc
        .bilinear_matrix()
        .iter()
        .map(|row| row.iter().map(|p| rational_string(&p.value())).collect())
        .collect();
    let results = json!({
        "rank": lat.rank(),
        "det": lat.det(),
        "level_ell": lat.level_ell(),
        "invariant_factors": disc.invariant_factors(),
        "order": disc.order(),
        "exponent": disc.exponent(),
        "quadratic": disc.quadratic_diagonal().iter().map(rational_string).collect::<Vec<_>>(),
        "bilinear": bilinear,
        "nondegenerate": disc.is_nondegenerate(),
        "gauss_sum": { "re": g.value.re, "im": g.value.im, "sigma": g.sigma, "modulus_error": g.modulus_error },
    });
    Ok((inputs(config, json!({ "lattice": doc })), Outcome::verified(results)))
}

fn load_surface(arg: &str) -> Result<(Value, SurfaceDoc, Surface), CliError> {
    let doc = formats::load_json(arg)?;
    let sd = formats::parse_surface(&doc)?;
    let s = sd.surface()?;
    Ok((doc, sd, s))
}

fn blocks(config: &RunConfig, a: &SurfaceArgs) -> Result<(Value, Outcome), CliError> {
    let (ldoc, _, disc) = formats::load_lattice(&a.lattice)?;
    let (sdoc, sd, s) = load_surface(&a.surface)?;
    let labels = sd.labels(&s, &disc)?;
    let dim = block_dimension(&s, &labels, &disc)?;
    let deltas = delta_obstruction(&s, &labels, &disc)?;
    let comps: Vec<Value> = s
        .components()
        .iter()
        .zip(&deltas)
        .map(|(c, d)| json!({ "genus": c.genus, "boundaries": c.boundaries.len(), "delta": d.coords }))
        .collect();
    let results = json!({
        "dimension": dim,
        "euler_characteristic": s.euler_characteristic(),
        "components": comps,
    });
    Ok((inputs(config, json!({ "lattice": ldoc, "surface": sdoc })), Outcome::verified(results)))
}

#[derive(serde::Deserialize)]
struct SplitDoc {
    first: Value,
    #[serde(default)]
    second: Option<Value>,
    matching: Vec<(String, String)>,
}

fn split_json(split: &Split) -> Value {
    json!({
        "first": SurfaceDoc::from_surface(&split.first, &Default::default()),
        "second": split.second.as_ref().map(|s| SurfaceDoc::from_surface(s, &Default::default())),
        "matching": split.matching,
    })
}

fn factorize(config: &RunConfig, a: &FactorizeArgs) -> Result<(Value, Outcome), CliError> {
    let (ldoc, _, disc) = formats::load_lattice(&a.lattice)?;
    let (sdoc, sd, s) = load_surface(&a.surface)?;
    let labels = sd.labels(&s, &disc)?;
    let (splits, split_doc) = match &a.split {
        Some(arg) => {
            let doc = formats::load_json(arg)?;
            let parsed: SplitDoc = serde_json::from_value(doc.clone())?;
            let first = formats::parse_surface(&parsed.first)?.surface()?;
            let second = match &parsed.second {
                Some(v) => Some(formats::parse_surface(v)?.surface()?),
                None => None,
            };
            (vec![Split { first, second, matching: parsed.matching }], doc)
        }
        None => {
            if !s.is_connected() {
                return Err(CliError::invalid("random splits need a connected surface"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            ((0..a.trials).map(|_| random_split(&s, &mut rng)).collect(), Value::Null)
        }
    };
    let mut rows = Vec::new();
    let mut all = true;
    for split in &splits {
        let r = verify_factorization(&s, split, &labels, &disc, true)?;
        let equal = r.equal();
        all &= equal;
        let terms: Vec<Value> = r
            .terms
            .unwrap_or_default()
            .into_iter()
            .map(|(l, d)| json!({ "labels": l.iter().map(|e| e.coords.clone()).collect::<Vec<_>>(), "dimension": d }))
            .collect();
        rows.push(json!({ "split": split_json(split), "lhs": r.lhs, "rhs": r.rhs, "equal": equal, "terms": terms }));
    }
    let results = json!({ "checks": rows, "all_equal": all });
    Ok((
        inputs(config, json!({ "lattice": ldoc, "surface": sdoc, "split": split_doc })),
        Outcome { results, verified: all },
    ))
}

fn matrix_json(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| complex_pair(m[(i, j)])).collect()).collect()
}

fn modular(config: &RunConfig, a: &LatticeArg) -> Result<(Value, Outcome), CliError> {
    let tol = tolerance(config, 1e-9)?;
    let (doc, lat, disc) = formats::load_lattice(&a.lattice)?;
    let data = modular_data(&lat, &disc);
    let rel = genus1_mcg_rep(&disc);
    let elements: Vec<Vec<i64>> = disc.elements().map(|e| e.coords).collect();
    let results = json!({
        "order": disc.order(),
        "elements": elements,
        "sigma": data.sigma,
        "central_charge": rational_string(&data.central_charge),
        "s": matrix_json(&data.s),
        "t": (0..data.t.nrows()).map(|i| complex_pair(data.t[(i, i)])).collect::<Vec<_>>(),
        "relations": {
            "s_unitarity": rel.s_unitarity,
            "s_symmetry": rel.s_symmetry,
            "s_squared_conjugation": rel.s_squared_conjugation,
            "s_fourth": rel.s_fourth,
            "st_cubed": rel.st_cubed,
            "st_cubed_framed": rel.st_cubed_framed,
        },
        "tolerance": tol,
    });
    Ok((inputs(config, json!({ "lattice": doc })), Outcome { results, verified: rel.max_defect() < tol }))
}

fn verlinde(config: &RunConfig, a: &SurfaceArgs) -> Result<(Value, Outcome), CliError> {
    let tol = tolerance(config, 1e-6)?;
    let (ldoc, _, disc) = formats::load_lattice(&a.lattice)?;
    let (sdoc, sd, s) = load_surface(&a.surface)?;
    let labels = sd.labels(&s, &disc)?;
    let r = verlinde_check(&s, &labels, &disc)?;
    let verified = r.agrees() && r.deviation < tol;
    let results = json!({
        "value": r.value,
        "rounded": r.rounded,
        "block_dimension": r.block_dimension,
        "deviation": r.deviation,
        "agrees": r.agrees(),
        "tolerance": tol,
    });
    Ok((inputs(config, json!({ "lattice": ldoc, "surface": sdoc })), Outcome { results, verified }))
}

fn theta_cmd(config: &RunConfig, a: &ThetaArgs) -> Result<(Value, Outcome), CliError> {
    if let Some(p) = &a.polarization {
        let d: Vec<u64> = formats::parse_int_list(p)?
            .into_iter()
            .map(|x| u64::try_from(x).map_err(|_| CliError::invalid("polarization entries must be positive")))
            .collect::<Result<_, _>>()?;
        let r = theta_space_dimension(&d)?;
        let results = json!({
            "dimension": r.dimension,
            "numerical_rank": r.numerical_rank,
            "samples": r.samples,
            "singular_values": r.singular_values,
        });
        return Ok((inputs(config, Value::Null), Outcome::verified(results)));
    }
    let tau_doc = formats::load_json(a.tau.as_deref().ok_or_else(|| CliError::invalid("--tau is required"))?)?;
    let tau = SiegelPoint::from_rows(&formats::parse_complex_matrix(&tau_doc)?)?;
    let g = tau.genus();
    let z_doc = match &a.z {
        Some(z) => formats::load_json(z)?,
        None => json!(vec![0.0; g]),
    };
    let z = formats::parse_complex_vector(&z_doc)?;
    let spec = match &a.characteristic {
        Some(c) => {
            let (ca, cb) = formats::parse_characteristic(c)?;
            ThetaSpec::with_characteristic(ca, cb)?
        }
        None => ThetaSpec::zero(g),
    };
    let v = theta(&spec, &z, &tau, a.tol)?;
    let mut results = json!({
        "value_re": v.value.re,
        "value_im": v.value.im,
        "tail_bound": v.tail_bound,
        "rounding_bound": v.rounding_bound,
        "R": v.radius,
    });
    let mut verified = true;
    if let Some(h) = a.heat_step {
        if !(h > 0.0) {
            return Err(CliError::invalid("--heat-step must be positive"));
        }
        let tol = tolerance(config, 1e-6)?;
        let r = heat_equation_residual(&spec, &z, &tau, h, FiniteDifference::Richardson)?;
        results["heat_residual"] = json!(r);
        results["heat_tolerance"] = json!(tol);
        verified = r < tol;
    }
    Ok((inputs(config, json!({ "tau": tau_doc, "z": z_doc })), Outcome { results, verified }))
}

fn fock(config: &RunConfig, c: &FockCommand) -> Result<(Value, Outcome), CliError> {
    match c {
        FockCommand::Character { lattice, phi, max_energy } => {
            let (doc, lat, disc) = formats::load_lattice(lattice)?;
            let phi = match phi {
                Some(p) => formats::element(&disc, &formats::parse_int_list(p)?)?,
                None => disc.zero(),
            };
            let ch = sector_character(&lat, &disc, &phi, *max_energy)?;
            let brute = enumerated_character(&lat, &disc, &phi, *max_energy)?;
            let pe = positive_energy_check(&sector_spectrum(&lat, &disc, &phi, (*max_energy).min(4))?);
            let agrees = brute == ch.coefficients;
            let results = json!({
                "phi": phi.coords,
                "lift": ch.lift.iter().map(rational_string).collect::<Vec<_>>(),
                "ground_energy": rational_string(&ch.ground_energy),
                "coefficients": ch.coefficients,
                "enumeration_agrees": agrees,
                "positive_energy": pe.holds,
            });
            Ok((inputs(config, json!({ "lattice": doc })), Outcome { results, verified: agrees && pe.holds }))
        }
        FockCommand::Sewing { lattice, max_energy } => {
            let (doc, lat, disc) = formats::load_lattice(lattice)?;
            let r = annulus_sewing_check(&lat, &disc, *max_energy)?;
            let table: Vec<Value> = r
                .sewn
                .iter()
                .map(|((l, rr), n)| json!({ "left": rational_string(l), "right": rational_string(rr), "count": n }))
                .collect();
            let agrees = r.agrees();
            let results = json!({ "agrees": agrees, "entries": table.len(), "table": table });
            Ok((inputs(config, json!({ "lattice": doc })), Outcome { results, verified: agrees }))
        }
        FockCommand::Overlap { t } => {
            let doc = formats::load_json(t)?;
            let rows = formats::parse_complex_matrix(&doc)?;
            if rows.iter().any(|r| r.len() != rows.len()) {
                return Err(CliError::invalid("T must be square"));
            }
            let m = linalg::from_rows(&rows);
            let v = bogoliubov_overlap(&m)?;
            let results = json!({ "overlap": v, "operator_norm": linalg::operator_norm(&m) });
            Ok((inputs(config, json!({ "t": doc })), Outcome::verified(results)))
        }
        FockCommand::Modes { rank, max_mode, max_energy } => {
            if *rank == 0 || *max_mode == 0 {
                return Err(CliError::invalid("rank and max mode must be positive"));
            }
            let basis = FockBasis::new(ModeTruncation { rank: *rank, max_mode: *max_mode, max_energy: *max_energy });
            let r = commutator_check(&basis);
            let results = json!({
                "basis_size": r.basis_size,
                "interior_states": r.interior_states,
                "checked": r.checked,
                "failures": r.failures,
                "coverage": r.coverage(),
            });
            Ok((inputs(config, Value::Null), Outcome { results, verified: r.holds() }))
        }
    }
}

fn heisenberg(config: &RunConfig, a: &HeisenbergArgs) -> Result<(Value, Outcome), CliError> {
    let tol = tolerance(config, 1e-9)?;
    let (doc, _, disc) = formats::load_lattice(&a.lattice)?;
    let s = Surface::closed(a.genus);
    let r = stone_von_neumann(&disc, &s)?;
    let mut verified = r.passes(tol);
    let mut results = json!({
        "genus": a.genus,
        "dimension": r.dimension,
        "intertwiner_dim_characters": r.intertwiner_dim_characters,
        "intertwiner_dim_linear": r.intertwiner_dim_linear,
        "commutant_dimension": r.commutant_dimension,
        "unitarity_defect": r.unitarity_defect,
        "intertwining_defect": r.intertwining_defect,
        "passes": r.passes(tol),
        "tolerance": tol,
    });
    if a.decompose {
        let h = HeisenbergGroup::from_surface(&s, &disc, Cocycle::Polarized);
        let mut subgroups = 0;
        let mut checked = 0;
        let mut failures = 0;
        for b in isotropic_subgroups(&h)? {
            subgroups += 1;
            for chi in Splitting::all_for(&h, &b)? {
                checked += 1;
                if !check_induced_decomposition(&h, &b, &chi)?.holds() {
                    failures += 1;
                }
            }
        }
        verified &= failures == 0;
        results["decomposition"] = json!({ "isotropic_subgroups": subgroups, "splittings": checked, "failures": failures });
    }
    Ok((inputs(config, json!({ "lattice": doc })), Outcome { results, verified }))
}
