//! The acceptance suite: ten criteria, run in parallel, reported in id order.

use lattice_cft_core::fock::{annulus_sewing_check, bogoliubov_overlap, sector_character};
use lattice_cft_core::heisenberg::{check_induced_decomposition, isotropic_subgroups, stone_von_neumann, Cocycle, HeisenbergGroup, Splitting};
use lattice_cft_core::lattice::{catalog, discriminant_group, gauss_sum, EvenLattice};
use lattice_cft_core::linalg::CMatrix;
use lattice_cft_core::modular::{
    block_dimension, genus1_relations, random_connected_surface, random_labels, random_split, s_matrix,
    verify_factorization, verlinde_check,
};
use lattice_cft_core::theta::{
    classical_automorphy, convergence_slope, heat_equation_residual, theta, theta_space_dimension, FiniteDifference,
    SiegelPoint, ThetaSpec, DEFAULT_STEP,
};
use lattice_cft_core::{BlockLabel, Complex64, Rational, Surface};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::{self, Command, FockCommand, LatticeArg, RunConfig, SurfaceArgs, ThetaArgs, FactorizeArgs};
use crate::oracles;
use crate::report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Negate the S-matrix before checking the genus-one relations.
    SSignFlip,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AcceptConfig {
    pub seed: u64,
    /// Replaces every numerical tolerance when set.
    pub tolerance: Option<f64>,
    pub fault: Option<Fault>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Exact,
    Numerical,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub kind: Kind,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub criteria: Vec<CriterionResult>,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

type Check = Result<(bool, Value), String>;

struct Criterion {
    id: u8,
    name: &'static str,
    kind: Kind,
    default_tolerance: Option<f64>,
    run: fn(&Ctx) -> Check,
}

struct Ctx {
    seed: u64,
    tol: f64,
    overridden: Option<f64>,
    fault: Option<Fault>,
}

impl Ctx {
    /// A secondary tolerance of the criterion, unless overridden.
    fn tol_or(&self, default: f64) -> f64 {
        self.overridden.unwrap_or(default)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

const CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, name: "normalization", kind: Kind::Exact, default_tolerance: None, run: normalization },
    Criterion { id: 2, name: "factorization_sweep", kind: Kind::Exact, default_tolerance: None, run: factorization },
    Criterion { id: 3, name: "stone_von_neumann", kind: Kind::Numerical, default_tolerance: Some(1e-9), run: stone },
    Criterion { id: 4, name: "induced_decomposition", kind: Kind::Exact, default_tolerance: None, run: decomposition },
    Criterion { id: 5, name: "modular_relations", kind: Kind::Numerical, default_tolerance: Some(1e-9), run: modular },
    Criterion { id: 6, name: "verlinde", kind: Kind::Numerical, default_tolerance: Some(1e-6), run: verlinde },
    Criterion { id: 7, name: "theta", kind: Kind::Numerical, default_tolerance: Some(1e-9), run: theta_checks },
    Criterion { id: 8, name: "loop_group_characters", kind: Kind::Exact, default_tolerance: None, run: characters },
    Criterion { id: 9, name: "bogoliubov_overlap", kind: Kind::Numerical, default_tolerance: Some(1e-8), run: overlap },
    Criterion { id: 10, name: "determinism", kind: Kind::Exact, default_tolerance: None, run: determinism },
];

/// Thread pool capped by `LATTICE_CFT_THREADS` when set.
pub fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var("LATTICE_CFT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool")
}

pub fn run(cfg: &AcceptConfig) -> Summary {
    let criteria: Vec<CriterionResult> = thread_pool().install(|| {
        CRITERIA
            .par_iter()
            .map(|c| {
                let tol = c.default_tolerance.map(|d| cfg.tolerance.unwrap_or(d));
                let ctx = Ctx {
                    seed: cfg.seed.wrapping_add(c.id as u64),
                    tol: tol.unwrap_or(0.0),
                    overridden: cfg.tolerance,
                    fault: cfg.fault,
                };
                let (passed, detail) = match (c.run)(&ctx) {
                    Ok(r) => r,
                    Err(e) => (false, json!({ "error": e })),
                };
                CriterionResult { id: c.id, name: c.name, kind: c.kind, passed, tolerance: tol, detail }
            })
            .collect()
    });
    let passed = criteria.iter().filter(|c| c.passed).count();
    Summary { failed: criteria.len() - passed, passed, criteria }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn small_bundled(max_order: i64) -> Vec<(&'static str, EvenLattice)> {
    catalog::bundled().into_iter().filter(|(_, l)| l.det() <= max_order).collect()
}

fn normalization(_: &Ctx) -> Check {
    let mut dims = Vec::new();
    for (name, l) in catalog::bundled() {
        let d = block_dimension(&Surface::sphere(), &BlockLabel::new(), &discriminant_group(&l)).map_err(err)?;
        dims.push((name, d));
    }
    let ok = dims.iter().all(|(_, d)| *d == 1);
    Ok((ok, json!({ "sphere_dimensions": dims.into_iter().collect::<std::collections::BTreeMap<_, _>>() })))
}

/// Every shape `g ≤ 3`, `b ≤ 4` gets ten random splits: 200 gluings per lattice.
fn factorization(ctx: &Ctx) -> Check {
    let mut rng = ctx.rng();
    let mut checked = 0;
    let mut failures = Vec::new();
    let lattices = small_bundled(16);
    for (name, l) in &lattices {
        let disc = discriminant_group(l);
        for g in 0..=3 {
            for b in 0..=4 {
                for _ in 0..10 {
                    let s = random_connected_surface(g, b, &mut rng);
                    let split = random_split(&s, &mut rng);
                    let labels = random_labels(&s, &disc, 0.7, &mut rng);
                    let r = verify_factorization(&s, &split, &labels, &disc, false).map_err(err)?;
                    checked += 1;
                    if !r.equal() {
                        failures.push(json!({ "lattice": name, "genus": g, "boundaries": b, "lhs": r.lhs, "rhs": r.rhs }));
                    }
                }
            }
        }
    }
    Ok((failures.is_empty(), json!({ "lattices": lattices.len(), "gluings": checked, "failures": failures })))
}

fn stone(ctx: &Ctx) -> Check {
    let mut rows = Vec::new();
    let mut ok = true;
    for (name, l) in small_bundled(16) {
        let disc = discriminant_group(&l);
        for g in 1..=2 {
            let r = stone_von_neumann(&disc, &Surface::closed(g)).map_err(err)?;
            let pass = r.passes(ctx.tol);
            ok &= pass;
            rows.push(json!({
                "lattice": name,
                "genus": g,
                "dimension": r.dimension,
                "intertwiner_dim": r.intertwiner_dim_characters,
                "commutant_dim": r.commutant_dimension,
                "passed": pass,
            }));
        }
    }
    Ok((ok, json!({ "cases": rows })))
}

fn decomposition(_: &Ctx) -> Check {
    let mut rows = Vec::new();
    let mut ok = true;
    for (name, l) in small_bundled(8) {
        let disc = discriminant_group(&l);
        let h = HeisenbergGroup::from_surface(&Surface::closed(1), &disc, Cocycle::Polarized);
        let mut subgroups = 0;
        let mut checked = 0;
        let mut failures = 0;
        for b in isotropic_subgroups(&h).map_err(err)? {
            subgroups += 1;
            for chi in Splitting::all_for(&h, &b).map_err(err)? {
                checked += 1;
                if !check_induced_decomposition(&h, &b, &chi).map_err(err)?.holds() {
                    failures += 1;
                }
            }
        }
        ok &= failures == 0;
        rows.push(json!({ "lattice": name, "isotropic_subgroups": subgroups, "splittings": checked, "failures": failures }));
    }
    Ok((ok, json!({ "cases": rows })))
}

fn modular(ctx: &Ctx) -> Check {
    let mut rows = Vec::new();
    let mut ok = true;
    for (name, l) in [("A1", catalog::a(1)), ("A2", catalog::a(2)), ("D4", catalog::d(4)), ("E8", catalog::e(8))] {
        let disc = discriminant_group(&l);
        let mut s = s_matrix(&disc);
        if ctx.fault == Some(Fault::SSignFlip) {
            s = -s;
        }
        let rel = genus1_relations(&disc, &s);
        let g = gauss_sum(&disc);
        let oracle = oracles::coset_modular_data(&l);
        let mut q: Vec<Rational> = disc.elements().map(|a| disc.quadratic(&a)).collect();
        q.sort();
        let gauss_error = (g.value - oracle.gauss_sum).norm();
        let defects = [rel.s_unitarity, rel.s_squared_conjugation, rel.st_cubed, oracle.max_defect, gauss_error];
        let pass = g.sigma == oracle.sigma
            && q == oracle.quadratic_values
            && defects.iter().all(|&d| d < ctx.tol);
        ok &= pass;
        rows.push(json!({
            "lattice": name,
            "sigma": g.sigma,
            "oracle_sigma": oracle.sigma,
            "s_unitarity": rel.s_unitarity,
            "s_squared_conjugation": rel.s_squared_conjugation,
            "st_cubed": rel.st_cubed,
            "oracle_defect": oracle.max_defect,
            "gauss_sum_error": gauss_error,
            "passed": pass,
        }));
    }
    Ok((ok, json!({ "cases": rows })))
}

fn verlinde(ctx: &Ctx) -> Check {
    let mut rng = ctx.rng();
    let lattices = small_bundled(16);
    let mut max_dev = 0.0f64;
    let mut mismatches = 0;
    for _ in 0..500 {
        let (_, l) = &lattices[rng.gen_range(0..lattices.len())];
        let disc = discriminant_group(l);
        let s = random_connected_surface(rng.gen_range(0..=3), rng.gen_range(0..=4), &mut rng);
        let labels = random_labels(&s, &disc, 0.6, &mut rng);
        let r = verlinde_check(&s, &labels, &disc).map_err(err)?;
        max_dev = max_dev.max(r.deviation);
        mismatches += (!r.agrees()) as usize;
    }
    Ok((mismatches == 0 && max_dev < ctx.tol, json!({ "instances": 500, "mismatches": mismatches, "max_deviation": max_dev })))
}

fn random_tau<R: Rng>(g: usize, rng: &mut R) -> SiegelPoint {
    loop {
        let mut m = CMatrix::from_element(g, g, Complex64::new(0.0, 0.0));
        for i in 0..g {
            for j in i..g {
                let x = rng.gen_range(-0.5..0.5);
                let y = if i == j { rng.gen_range(0.8..1.5) } else { rng.gen_range(-0.2..0.2) };
                m[(i, j)] = Complex64::new(x, y);
                m[(j, i)] = Complex64::new(x, y);
            }
        }
        if let Ok(t) = SiegelPoint::new(m) {
            if t.lambda_min() >= 0.5 {
                return t;
            }
        }
    }
}

fn random_z<R: Rng>(g: usize, rng: &mut R) -> Vec<Complex64> {
    (0..g).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5))).collect()
}

fn theta_checks(ctx: &Ctx) -> Check {
    let mut rng = ctx.rng();
    let tol_quasi = ctx.tol_or(1e-8);
    let tol_heat = ctx.tol_or(1e-6);

    let t3 = theta(&ThetaSpec::zero(1), &[Complex64::new(0.0, 0.0)], &SiegelPoint::imaginary_identity(1), 1e-14).map_err(err)?;
    let theta3_error = (t3.value - oracles::theta3_direct(1.0)).norm();

    let mut quasi_error = 0.0f64;
    for i in 0..20 {
        let g = 1 + i % 2;
        let tau = random_tau(g, &mut rng);
        let a: Vec<Rational> = (0..g).map(|_| Rational::new(rng.gen_range(0..6), 6)).collect();
        let b: Vec<Rational> = (0..g).map(|_| Rational::new(rng.gen_range(0..6), 6)).collect();
        let spec = ThetaSpec::with_characteristic(a.clone(), b.clone()).map_err(err)?;
        let z = random_z(g, &mut rng);
        let m: Vec<i64> = (0..g).map(|_| rng.gen_range(-2..=2)).collect();
        let n: Vec<i64> = (0..g).map(|_| rng.gen_range(-2..=2)).collect();
        let lam = tau.lattice_vector(&m, &n);
        let shifted: Vec<Complex64> = z.iter().zip(&lam).map(|(x, y)| x + y).collect();
        let base = theta(&spec, &z, &tau, 1e-14).map_err(err)?.value;
        let moved = theta(&spec, &shifted, &tau, 1e-14).map_err(err)?.value;
        let af: Vec<f64> = a.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect();
        let bf: Vec<f64> = b.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect();
        let factor = oracles::automorphy_factor(&af, &bf, &m, &n, &z, tau.tau());
        let scale = (factor * base).norm().max(1.0);
        quasi_error = quasi_error.max((moved - factor * base).norm() / scale);
        quasi_error = quasi_error.max((factor - classical_automorphy(&spec, &m, &n, &z, &tau)).norm() / factor.norm().max(1.0));
    }

    let mut heat_max = 0.0f64;
    for _ in 0..10 {
        let g = rng.gen_range(1..=2);
        let tau = random_tau(g, &mut rng);
        let z = random_z(g, &mut rng);
        let r = heat_equation_residual(&ThetaSpec::zero(g), &z, &tau, DEFAULT_STEP, FiniteDifference::Richardson).map_err(err)?;
        heat_max = heat_max.max(r);
    }
    let hs = [0.08, 0.04, 0.02, 0.01];
    let tau1 = SiegelPoint::imaginary_identity(1);
    let z1 = [Complex64::new(0.3, 0.2)];
    let rs = hs
        .iter()
        .map(|&h| heat_equation_residual(&ThetaSpec::zero(1), &z1, &tau1, h, FiniteDifference::Central))
        .collect::<Result<Vec<f64>, _>>()
        .map_err(err)?;
    let slope = convergence_slope(&hs, &rs);

    let mut dims = Vec::new();
    let mut dims_ok = true;
    for pol in [vec![1u64, 1], vec![1, 2], vec![1, 3]] {
        let d = theta_space_dimension(&pol).map_err(err)?;
        let expected: u64 = pol.iter().product();
        dims_ok &= d.numerical_rank as u64 == expected;
        dims.push(json!({ "type": pol, "numerical_rank": d.numerical_rank, "expected": expected }));
    }

    let ok = theta3_error < ctx.tol
        && quasi_error < tol_quasi
        && heat_max < tol_heat
        && (1.8..=2.2).contains(&slope)
        && dims_ok;
    Ok((
        ok,
        json!({
            "theta3_error": theta3_error,
            "quasi_periodicity_error": quasi_error,
            "quasi_periodicity_tolerance": tol_quasi,
            "heat_residual_max": heat_max,
            "heat_tolerance": tol_heat,
            "heat_convergence_slope": slope,
            "dimensions": dims,
        }),
    ))
}

fn characters(_: &Ctx) -> Check {
    let mut rows = Vec::new();
    let mut ok = true;
    for (name, l) in catalog::bundled().into_iter().filter(|(_, l)| l.rank() <= 2 && l.det() <= 9) {
        let disc = discriminant_group(&l);
        let mut sectors_ok = true;
        for phi in disc.elements() {
            let ch = sector_character(&l, &disc, &phi, 10).map_err(err)?;
            let (ground, coeffs) = oracles::brute_force_character(&l, &disc, &phi, 10);
            sectors_ok &= ch.ground_energy == ground && ch.coefficients == coeffs;
        }
        ok &= sectors_ok;
        rows.push(json!({ "lattice": name, "sectors": disc.order(), "characters_match": sectors_ok }));
    }
    let mut sewing = Vec::new();
    for (name, l) in [("A1", catalog::a(1)), ("A2", catalog::a(2))] {
        let r = annulus_sewing_check(&l, &discriminant_group(&l), 12).map_err(err)?;
        ok &= r.agrees();
        sewing.push(json!({ "lattice": name, "max_energy": 12, "entries": r.sewn.len(), "agrees": r.agrees() }));
    }
    Ok((ok, json!({ "characters": rows, "sewing": sewing })))
}

fn random_symmetric_contraction<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let mut t = CMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        for j in i..n {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            t[(i, j)] = z;
            t[(j, i)] = z;
        }
    }
    let norm = lattice_cft_core::linalg::operator_norm(&t);
    t * Complex64::new(rng.gen_range(0.05..0.7) / norm, 0.0)
}

fn overlap(ctx: &Ctx) -> Check {
    let mut rng = ctx.rng();
    let mut max_err = 0.0f64;
    let mut cases = 0;
    let mut ts = vec![CMatrix::from_element(1, 1, Complex64::new(0.5, 0.0))];
    for n in 1..=2 {
        for _ in 0..8 {
            ts.push(random_symmetric_contraction(n, &mut rng));
        }
    }
    for t in &ts {
        let a = bogoliubov_overlap(t).map_err(err)?;
        max_err = max_err.max((a - oracles::quadrature_overlap(t)).abs());
        cases += 1;
    }
    Ok((max_err < ctx.tol, json!({ "cases": cases, "max_error": max_err })))
}

fn determinism(ctx: &Ctx) -> Check {
    let sphere = r#"{"format":1,"components":[{"genus":0,"boundaries":[]}]}"#;
    let pants = r#"{"format":1,"genus":1,"boundaries":[{"id":"x","orientation":"out"},{"id":"y","orientation":"in"}],"labels":{"x":[1],"y":[1]}}"#;
    let commands = [
        Command::Disc(LatticeArg { lattice: "D4".into() }),
        Command::Blocks(SurfaceArgs { lattice: "A2".into(), surface: sphere.into() }),
        Command::Factorize(FactorizeArgs { lattice: "A1".into(), surface: pants.into(), split: None, trials: 5 }),
        Command::Modular(LatticeArg { lattice: "A2".into() }),
        Command::Verlinde(SurfaceArgs { lattice: "A1".into(), surface: pants.into() }),
        Command::Theta(ThetaArgs {
            tau: Some("[[[0.1,1.2]]]".into()),
            z: Some("[[0.2,0.1]]".into()),
            characteristic: Some("1/2,0".into()),
            tol: 1e-12,
            heat_step: Some(1e-3),
            polarization: None,
        }),
        Command::Fock { command: FockCommand::Character { lattice: "A2".into(), phi: Some("1".into()), max_energy: 6 } },
    ];
    let mut rows = Vec::new();
    let mut ok = true;
    for command in commands {
        let name = command.name();
        let cfg = RunConfig { command, seed: ctx.seed, tolerance: None, output: None };
        let render = || match commands::execute(&cfg) {
            Ok((inputs, outcome)) => report::render(name, &inputs, cfg.seed, &outcome),
            Err(e) => report::render_error(name, &e),
        };
        let first = render();
        let second = render();
        let same = first == second && !first.contains("error_kind");
        ok &= same;
        rows.push(json!({ "command": name, "bytes": first.len(), "identical": same }));
    }
    Ok((ok, json!({ "commands": rows })))
}
