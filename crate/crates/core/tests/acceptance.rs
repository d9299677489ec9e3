use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ha_lab::atoms::{decay_scan, make_simple_atom, two_cell_atom, AtomSpec, ScanSettings, ScanSide, ScanVariant};
use ha_lab::counterexamples::{
    carleman_norm_term, carleman_partial_f, carleman_weighted_term, partial_sum_scan, reverse_hardy_pair, rudin_shapiro_sup_ratio,
    signed_hardy_pair, StepSequenceSpec,
};
use ha_lab::fourier::FrequencyGrid;
use ha_lab::hardy::{commute_check_with, hardy_eps, hardy_point, t_epsilon, EpsilonMask, HardyGrid};
use ha_lab::harness::{
    hlp_net_ratio, ratio_spread, refinement_sweep, validate_params, Family, FamilySpec, IneqKind, IneqParams, PittParams, Variant,
};
use ha_lab::netspace::{doubling_check, hardy_tail_bound};
use ha_lab::rearrange::{hlp_pairing, iterative_rearrange};
use ha_lab::{Axis, GridFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn spread(xs: &[f64]) -> f64 {
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    hi / lo - 1.0
}

fn random_axis(rng: &mut ChaCha8Rng, max_cells: usize) -> Axis {
    let cells = rng.gen_range(1..=max_cells);
    let mut bp = vec![rng.gen_range(-2.0..1.0)];
    for _ in 0..cells {
        let last = *bp.last().unwrap();
        bp.push(last + rng.gen_range(0.05..1.0));
    }
    Axis::new(bp).unwrap()
}

fn random_function(rng: &mut ChaCha8Rng, d: usize, max_cells: usize, signed: bool) -> GridFunction {
    let axes: Vec<Axis> = (0..d).map(|_| random_axis(rng, max_cells)).collect();
    let n: usize = axes.iter().map(Axis::cells).product();
    let lo = if signed { -2.0 } else { 0.0 };
    let vals: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..2.0)).collect();
    GridFunction::from_real(axes, vals).unwrap()
}

fn closed_form_operators() -> Outcome {
    let f = GridFunction::indicator(&[(0.0, 1.0)]).unwrap();
    let (e0, e1) = (EpsilonMask::zeros(1), EpsilonMask::ones(1));
    let mut worst: f64 = 0.0;
    for j in 1..=400 {
        let t = -8.0 + 16.0 * (j as f64 - 0.5) / 400.0;
        let h = if t > 0.0 { 1f64.min(1.0 / t) } else { 0.0 };
        let b = if t > 0.0 && t < 1.0 { -t.ln() } else { 0.0 };
        worst = worst.max((hardy_point(&f, &e0, &[t]).unwrap().re - h).abs());
        worst = worst.max((hardy_point(&f, &e1, &[t]).unwrap().re - b).abs());
    }
    // cell averages of the grid outputs against the exact means
    let hg = hardy_eps(&f, &e0).unwrap();
    for j in 0..hg.axis(0).cells() {
        let (c, e) = hg.axis(0).cell(j);
        let exact = if e <= 1.0 {
            1.0
        } else if c >= 1.0 {
            (e / c).ln() / (e - c)
        } else {
            (1.0 - c + e.ln()) / (e - c)
        };
        worst = worst.max((hg.values()[j].re - exact).abs());
    }
    let bg = hardy_eps(&f, &e1).unwrap();
    let anti = |t: f64| if t <= 0.0 { 0.0 } else { t.min(1.0) - t.min(1.0) * t.min(1.0).ln() };
    for j in 0..bg.axis(0).cells() {
        let (c, e) = bg.axis(0).cell(j);
        let exact = (anti(e) - anti(c)) / (e - c);
        worst = worst.max((bg.values()[j].re - exact).abs());
    }
    ensure(worst < 1e-10, || format!("max error {worst:e}"))?;
    Ok(format!("max error {worst:.1e}"))
}

fn atom_integral() -> Outcome {
    let h = hardy_eps(&two_cell_atom(), &EpsilonMask::zeros(1)).map_err(|e| e.to_string())?;
    let err = (h.integral().re - 2f64.ln()).abs();
    ensure(err < 1e-8 && h.integral().im == 0.0, || format!("integral {} off by {err:e}", h.integral()))?;
    Ok(format!("|int Ha - ln 2| = {err:.1e}"))
}

fn commutation() -> Outcome {
    let g = FamilySpec::new(Family::Gaussian { d: 1, sigma: 1.0, extent: 4.0 }, 16).generate(0).unwrap();
    // the main lobe of the transform, |xi| <= 2 sigma^-1
    let xi = FrequencyGrid::uniform(1, 2.0, 48).unwrap();
    let coarse = HardyGrid::default().refined().refined();
    let a = commute_check_with(&g, &xi, &coarse).map_err(|e| e.to_string())?;
    let b = commute_check_with(&g, &xi, &coarse.refined()).map_err(|e| e.to_string())?;
    ensure(a.max_rel_err < 1e-3 && b.max_rel_err < a.max_rel_err, || {
        format!("relative errors {:e} -> {:e}", a.max_rel_err, b.max_rel_err)
    })?;
    Ok(format!("max rel err {:.2e} -> {:.2e}", a.max_rel_err, b.max_rel_err))
}

fn equimeasurability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.gen_range(1..=3);
        let f = random_function(&mut rng, d, 6, true);
        let r = iterative_rearrange(&f).map_err(|e| e.to_string())?;
        for p in [0.5, 1.0, 2.0, 4.0] {
            let (a, b) = (f.lp_norm(p), r.lp_norm(p));
            worst = worst.max((a - b).abs() / a);
        }
    }
    ensure(worst < 1e-12, || format!("max relative deviation {worst:e}"))?;
    Ok(format!("max relative deviation {worst:.1e}"))
}

fn doubling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut violations = 0;
    let mut tightest: f64 = 0.0;
    for trial in 0..500 {
        let d = 1 + trial % 2;
        let f = random_function(&mut rng, d, 8, true);
        let mut rect = Vec::new();
        let mut t = Vec::new();
        for i in 0..d {
            let ax = f.axis(i);
            let width = rng.gen_range(0.01..1.0) * (ax.hi() - ax.lo());
            let lo = rng.gen_range(ax.lo() - 0.5..ax.hi());
            rect.push((lo, lo + width));
            t.push(width * rng.gen_range(1.0..4.0));
        }
        let (lhs, rhs) = doubling_check(&f, &rect, &t).map_err(|e| e.to_string())?;
        if lhs > rhs * (1.0 + 1e-12) {
            violations += 1;
        }
        if rhs > 0.0 {
            tightest = tightest.max(lhs / rhs);
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok(format!("0 violations, max lhs/rhs {tightest:.3}"))
}

fn tail_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut checks = 0;
    let mut worst: f64 = 0.0;
    for j in 0..20 {
        let d = 1 + j % 2;
        let f = random_function(&mut rng, d, 5, false);
        let ks: Vec<Vec<i32>> = if d == 1 {
            (-4..=3).map(|k| vec![k]).collect()
        } else {
            (-3..=2).flat_map(|a| (-3..=2).map(move |b| vec![a, b])).collect()
        };
        for eps in EpsilonMask::all(d) {
            for k in &ks {
                let tb = hardy_tail_bound(&f, &eps, k, 5).map_err(|e| e.to_string())?;
                ensure(tb.lhs <= tb.rhs * (1.0 + 1e-12), || format!("eps={eps} k={k:?}: {} > {}", tb.lhs, tb.rhs))?;
                worst = worst.max(tb.lhs / tb.rhs);
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} annuli, 0 violations, max lhs/rhs {worst:.3}"))
}

fn test_functions() -> Vec<(&'static str, GridFunction)> {
    vec![
        ("chi(0,1)", GridFunction::indicator(&[(0.0, 1.0)]).unwrap()),
        ("gaussian", FamilySpec::new(Family::Gaussian { d: 1, sigma: 0.5, extent: 2.0 }, 8).generate(0).unwrap()),
        ("hat", FamilySpec::new(Family::Hat { d: 1, extent: 2.0 }, 8).generate(0).unwrap()),
        ("random", FamilySpec::new(Family::Random { d: 1, extent: 1.0, seed: 3 }, 4).generate(0).unwrap()),
        ("chi(0,1)^2", GridFunction::indicator(&[(0.0, 1.0), (-0.5, 0.5)]).unwrap()),
    ]
}

fn hlp_net_stability() -> Outcome {
    let ns = [2.0, 4.0, 8.0, 16.0];
    let mut worst: f64 = 0.0;
    for (name, f) in test_functions() {
        for p in [1.5, 2.0, 3.0] {
            let ratios: Vec<f64> = ns
                .iter()
                .map(|&n| hlp_net_ratio(&f, p, p, n).map(|r| r.ratio))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let s = spread(&ratios);
            ensure(s < 0.25, || format!("{name} p={p}: ratios {ratios:?}"))?;
            worst = worst.max(s);
        }
    }
    Ok(format!("max spread over N {:.1}%", 100.0 * worst))
}

fn refinement_stability() -> Outcome {
    let families = [
        FamilySpec::new(Family::Indicator { bounds: vec![(0.0, 1.0)] }, 4),
        FamilySpec::new(Family::Gaussian { d: 1, sigma: 1.0, extent: 4.0 }, 8),
        FamilySpec::new(Family::Hat { d: 1, extent: 2.0 }, 4),
        FamilySpec::new(Family::Random { d: 1, extent: 2.0, seed: 5 }, 4),
    ];
    let cases = [(IneqKind::Thm2Diag, 3.0), (IneqKind::Thm2Diag, 4.0), (IneqKind::Thm3Diag, 1.5), (IneqKind::Thm3Diag, 4.0)];
    let mut worst: f64 = 0.0;
    for fam in &families {
        for (kind, r) in cases {
            let reps = refinement_sweep(kind, fam, 3, &IneqParams::with_r(r), None, None).map_err(|e| e.to_string())?;
            let s = ratio_spread(&reps);
            let grew = reps.iter().any(|x| x.flags.iter().any(|f| f.starts_with("growth")));
            ensure(s < 0.25 && !grew && reps.iter().all(|x| x.ratio.is_finite()), || {
                format!("{} {kind} r={r}: ratios {:?}", fam.name(), reps.iter().map(|x| x.ratio).collect::<Vec<_>>())
            })?;
            worst = worst.max(s);
        }
    }
    // support in [-4, 4]^d: F_N f is final once N >= 8
    let tol = 1e-10;
    let schedule = [2.0, 4.0, 8.0, 16.0, 32.0];
    let mut last_gaps = Vec::new();
    for d in [1, 2] {
        let f = FamilySpec::new(Family::Gaussian { d, sigma: 1.0, extent: 4.0 }, if d == 1 { 16 } else { 4 }).generate(0).unwrap();
        let xi = FrequencyGrid::uniform(d, 6.0, if d == 1 { 48 } else { 12 }).unwrap();
        for eps in EpsilonMask::all(d) {
            let (_, rep) = t_epsilon(&f, &eps, &schedule, &xi, tol).map_err(|e| e.to_string())?;
            let monotone = rep.gaps.windows(2).all(|w| w[1] <= w[0]);
            let settled = rep.schedule.windows(2).zip(&rep.gaps).filter(|(n, _)| n[0] >= 8.0).all(|(_, g)| *g < tol);
            ensure(monotone && settled && rep.converged, || format!("d={d} eps={eps}: gaps {:?}", rep.gaps))?;
            last_gaps = rep.gaps;
        }
    }
    Ok(format!("max spread over levels {:.1}%, T_eps gaps {}", 100.0 * worst, last_gaps.iter().map(|g| format!("{g:.1e}")).collect::<Vec<_>>().join(" ")))
}

fn hlp_pairs() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=12);
        let mut bp = vec![0.0];
        for _ in 0..n {
            let last = *bp.last().unwrap();
            bp.push(last + rng.gen_range(0.05..1.5));
        }
        let axis = Axis::new(bp).unwrap();
        let mut phi: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..5.0)).collect();
        if rng.gen_bool(0.5) {
            phi.sort_by(|a, b| b.total_cmp(a));
        } else {
            phi.sort_by(|a, b| a.total_cmp(b));
        }
        let g: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..3.0) }).collect();
        let pair = hlp_pairing(
            &GridFunction::from_real(vec![axis.clone()], g).unwrap(),
            &GridFunction::from_real(vec![axis], phi).unwrap(),
        )
        .map_err(|e| e.to_string())?;
        ensure(pair.lhs <= pair.rhs * (1.0 + 1e-12) + 1e-300, || format!("{pair:?}"))?;
        if pair.rhs > 0.0 {
            worst = worst.max(pair.lhs / pair.rhs);
        }
    }
    Ok(format!("0 violations, max lhs/rhs {worst:.3}"))
}

fn atom_decay() -> Outcome {
    let rs: Vec<i32> = (3..=10).collect();
    let settings = ScanSettings::default();
    let mut atoms: Vec<(String, AtomSpec, GridFunction)> =
        vec![("p=1 two-cell".into(), AtomSpec::new(1.0, vec![(0.0, 2.0)], vec![], 2).unwrap(), two_cell_atom())];
    for (p, label) in [(1.0, "1"), (2.0 / 3.0, "2/3")] {
        let spec = AtomSpec::new(p, vec![(0.0, 1.0)], vec![], 16).unwrap();
        let a = make_simple_atom(&spec, 17).map_err(|e| e.to_string())?;
        atoms.push((format!("p={label} random"), spec, a));
    }
    let mut slopes = Vec::new();
    for (name, spec, a) in &atoms {
        for v in [ScanVariant::Fourier, ScanVariant::HardyFourier] {
            let scan = decay_scan(a, spec, &rs, ScanSide::Interior, v, &settings).map_err(|e| e.to_string())?;
            ensure(scan.passes(0.15) && scan.flags.is_empty(), || {
                format!("{name} {v}: slope {} vs predicted {} flags {:?}", scan.slope, scan.predicted, scan.flags)
            })?;
            slopes.push(format!("{name} {v} {:.3}", scan.slope));
        }
    }
    Ok(slopes.join("; "))
}

fn reverse_hardy() -> Outcome {
    let spec = StepSequenceSpec::standard(0.5);
    let pairs = (1..=8).map(|n| reverse_hardy_pair(&spec, n)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    ensure(pairs.iter().all(|p| p.i1 == 1.0), || "I1 != 1".into())?;
    let ratios: Vec<f64> = pairs.windows(2).map(|w| w[1].i2 / w[0].i2).collect();
    let off = ratios.iter().map(|r| (r / 2f64.sqrt() - 1.0).abs()).fold(0.0, f64::max);
    ensure(off < 0.2, || format!("step ratios {ratios:?}"))?;
    Ok(format!("I1 = 1, step ratios within {:.1}% of sqrt 2", 100.0 * off))
}

fn signed_law() -> Outcome {
    let pairs = [16u64, 64, 256].iter().map(|&n| signed_hardy_pair(0.5, n)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let per_log: Vec<f64> = pairs.iter().map(|p| p.i1 / (p.index as f64).ln()).collect();
    let i2: Vec<f64> = pairs.iter().map(|p| p.i2).collect();
    let (s1, s2) = (spread(&per_log), spread(&i2));
    ensure(s1 < 0.15 && s2 < 0.25, || format!("I1/ln N {per_log:?}, I2 {i2:?}"))?;
    Ok(format!("I1/ln N spread {:.1}%, I2 spread {:.1}%", 100.0 * s1, 100.0 * s2))
}

fn carleman() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1313);
    let ts: Vec<f64> = (0..1000).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
    let sup = rudin_shapiro_sup_ratio(4096, &ts).into_iter().fold(0.0, f64::max);
    ensure(sup <= 5.0, || format!("max |P_k| / sqrt(k+1) = {sup}"))?;
    let rep = carleman_partial_f(256, 500, 7).map_err(|e| e.to_string())?;
    ensure(rep.max_form_diff < 1e-10, || format!("Abel vs direct {:e}", rep.max_form_diff))?;
    let ms: Vec<u32> = (10..=60).collect();
    let l2 = partial_sum_scan(carleman_norm_term(2.0), &ms).map_err(|e| e.to_string())?;
    let cauchy = l2.block_sums.last().unwrap() / l2.partial_sums.last().unwrap();
    ensure(!l2.diverges() && cauchy < 1e-2, || format!("L2 slope {} last block {cauchy:e}", l2.slope))?;
    let p15 = partial_sum_scan(carleman_norm_term(1.5), &ms).map_err(|e| e.to_string())?;
    let w3 = partial_sum_scan(carleman_weighted_term(3.0), &ms).map_err(|e| e.to_string())?;
    ensure(p15.diverges() && w3.diverges(), || format!("slopes p=1.5 {} weighted p=3 {}", p15.slope, w3.slope))?;
    Ok(format!(
        "sup ratio {sup:.3}, Abel diff {:.1e}, slopes L2 {:.3} p=1.5 {:.3} weighted {:.3}",
        rep.max_form_diff, l2.slope, p15.slope, w3.slope
    ))
}

fn validation_table() -> Outcome {
    use Variant::{Pitt, Thm2, Thm3};
    const BAL: &str = "alpha = 1/r' - 1/q - beta";
    let third = 1.0 / 3.0;
    // (d, r, q, alpha, beta, variant, violated clauses)
    let table: Vec<(usize, f64, f64, f64, f64, Variant, &[&str])> = vec![
        (1, 2.0, 2.0, 0.0, 0.0, Pitt, &[]),
        (1, 2.0, 4.0, 0.25, 0.0, Pitt, &[]),
        (1, 2.0, 4.0, 0.5, -0.25, Pitt, &["alpha < 1/r'"]),
        (1, 2.0, 4.0, 0.375, -0.125, Pitt, &[]),
        (1, 3.0, 3.0, third, 0.0, Pitt, &[]),
        (1, 3.0, 3.0, 0.0, third, Pitt, &["beta <= 0"]),
        (1, 4.0, 2.0, -1.0, 1.25, Pitt, &["r <= q", "0 <= alpha", "beta <= 0"]),
        (1, 1.5, 3.0, 0.0, 0.0, Pitt, &[]),
        (1, 1.5, 3.0, 0.25, -0.25, Pitt, &[]),
        (1, 2.0, 2.0, 0.1, 0.0, Pitt, &[BAL]),
        (1, 1.0, 2.0, 0.0, 0.0, Pitt, &["1 < r"]),
        (1, 2.0, f64::INFINITY, 0.5, 0.0, Pitt, &["q < inf"]),
        (1, 4.0, 4.0, 0.0, 0.5, Thm2, &[]),
        (1, 3.0, 3.0, 0.0, third, Thm2, &[]),
        (1, 4.0, 4.0, 0.25, 0.25, Thm2, &[]),
        (1, 4.0, 4.0, -0.25, 0.75, Thm2, &["0 <= alpha"]),
        (1, 4.0, 4.0, 0.75, -0.25, Thm2, &["alpha < 1/r'"]),
        (1, 2.0, 6.0, 0.0, third, Thm2, &[]),
        (1, 2.0, 6.0, -1.0 / 6.0, 0.5, Thm2, &["0 <= alpha"]),
        (1, 1.25, 1.25, 0.0, -0.6, Thm2, &[]),
        (1, 4.0, 4.0, 0.5, 0.0, Thm3, &[]),
        (1, 1.5, 1.5, -third, 0.0, Thm3, &[]),
        (1, 4.0, 4.0, 0.4, 0.1, Thm3, &["1/r' - 1/q <= alpha"]),
        (1, 4.0, 4.0, 0.7, -0.2, Thm3, &[]),
        (1, 4.0, 4.0, 0.75, -0.25, Thm3, &["alpha < 1/r'"]),
        (2, 2.0, 4.0, 0.375, -0.125, Thm3, &[]),
        (1, 2.0, 4.0, 0.3, 0.0, Thm3, &[BAL]),
        (1, 3.0, 2.0, 1.0 / 6.0, 0.0, Thm3, &["r <= q"]),
        (1, 4.0, 4.0, 0.0, 0.5, Thm3, &["1/r' - 1/q <= alpha"]),
        (3, 2.0, 2.0, 0.0, 0.0, Thm3, &[]),
    ];
    let mut accepted = 0;
    for (i, &(d, r, q, alpha, beta, variant, expected)) in table.iter().enumerate() {
        let got: BTreeSet<String> = validate_params(&PittParams { d, r, q, alpha, beta, variant }).into_iter().collect();
        let want: BTreeSet<String> = expected.iter().map(|s| s.to_string()).collect();
        ensure(got == want, || format!("row {i}: got {got:?}, want {want:?}"))?;
        accepted += usize::from(want.is_empty());
    }
    Ok(format!("{} tuples, {accepted} accepted, {} rejected", table.len(), table.len() - accepted))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "closed-form H and B of chi(0,1)", limit: Duration::from_secs(1), run: closed_form_operators },
        Criterion { name: "integral of H applied to the two-cell atom", limit: Duration::from_secs(1), run: atom_integral },
        Criterion { name: "F(Hg) = B(Fg) on a Gaussian", limit: Duration::from_secs(30), run: commutation },
        Criterion { name: "rearrangement equimeasurability", limit: Duration::from_secs(10), run: equimeasurability },
        Criterion { name: "net-average doubling", limit: Duration::from_secs(30), run: doubling },
        Criterion { name: "dyadic tail bound on H_eps", limit: Duration::from_secs(60), run: tail_bound },
        Criterion { name: "net/Lorentz ratio independent of N", limit: Duration::from_secs(120), run: hlp_net_stability },
        Criterion { name: "weighted Hardy-Fourier ratios under refinement", limit: Duration::from_secs(300), run: refinement_stability },
        Criterion { name: "Hardy-Littlewood-Polya pairing", limit: Duration::from_secs(10), run: hlp_pairs },
        Criterion { name: "atom decay slopes", limit: Duration::from_secs(120), run: atom_decay },
        Criterion { name: "reverse Hardy growth", limit: Duration::from_secs(30), run: reverse_hardy },
        Criterion { name: "signed step function law", limit: Duration::from_secs(30), run: signed_law },
        Criterion { name: "Rudin-Shapiro and Carleman series", limit: Duration::from_secs(60), run: carleman },
        Criterion { name: "parameter validation truth table", limit: Duration::from_secs(1), run: validation_table },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; over the {:?} limit", c.limit)),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!("{} {:>2} {} ({:.2}s): {}", if ok { "PASS" } else { "FAIL" }, i + 1, c.name, took.as_secs_f64(), detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
