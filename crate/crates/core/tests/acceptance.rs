//! Acceptance criteria, one `[PASS]`/`[FAIL]` line each. Runs without the
//! libtest harness so the lines always reach the terminal.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use etk_core::discrimination::{
    binary_advantage, channel_pair_from_ta, diamond_norm, helstrom, knorm_estimate, knorm_profile, ta_from_ktp,
};
use etk_core::multichannel::{
    advantage_ratio_from, bound_s_k, build_task, guess_optimal, guess_with_bell, witness_to_channel,
};
use etk_core::operator::{basis_vector, kron_vec, partial_trace, CMatrix, HermitianOperator, Subsystem};
use etk_core::quantum::{bell_povm, max_entangled, random, BipartiteState, ChannelRep};
use etk_core::robustness::{pad_state, pad_witness, robustness_bounds, RobustnessCertificate, RobustnessConfig};
use etk_core::schmidt::{schmidt_decompose, reduction_family, ReductionFamilyMap};
use etk_core::sdp::{guessing_probability_sdp, SolverOptions};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn bell_witness(d: usize, k: usize) -> HermitianOperator {
    &HermitianOperator::identity(d * d) - &max_entangled(d).operator().scale(d as f64 / k as f64)
}

/// Independent check of the upper-bound decomposition: every vector has
/// Schmidt rank ≤ k, the weights are non-negative, `Σ w_j ψ_jψ_j† ⪰ ρ` and
/// `Σ w_j = 1 + upper`.
fn decomposition_ok(cert: &RobustnessCertificate, rho: &BipartiteState) -> bool {
    let ranks_ok = cert
        .decomposition
        .iter()
        .all(|(w, v)| *w >= 0.0 && schmidt_decompose(v, rho.dims()).map(|s| s.rank <= cert.k).unwrap_or(false));
    let y = cert.decomposition_operator();
    let dominates = (&y - rho.operator()).min_eigenvalue() >= -1e-9;
    let total: f64 = cert.decomposition.iter().map(|p| p.0).sum();
    ranks_ok && dominates && (total - 1.0 - cert.upper).abs() < 1e-9
}

fn ac1() -> Outcome {
    let cfg = RobustnessConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for (d, k) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)] {
        let rho = max_entangled(d);
        let want = d as f64 / k as f64 - 1.0;
        let start = Instant::now();
        let cert = match robustness_bounds(&rho, k, &cfg) {
            Ok(c) => c,
            Err(e) => {
                pass = false;
                parts.push(format!("({d},{k}) error {e}"));
                continue;
            }
        };
        let elapsed = start.elapsed();
        // Known feasible witness gives a lower bound the upper bound must respect.
        let oracle_lower = -bell_witness(d, k).inner(rho.operator());
        let ok = cert.lower <= want + 1e-9
            && cert.upper >= want - 1e-9
            && cert.width() <= 1e-4
            && elapsed <= Duration::from_secs(60)
            && cert.upper >= oracle_lower - 1e-9
            && cert.witness.operator.max_eigenvalue() <= 1.0 + 1e-9
            && decomposition_ok(&cert, &rho);
        pass &= ok;
        parts.push(format!(
            "({d},{k}) [{:.9}, {:.9}] width {:.1e} {:.1}s{}",
            cert.lower,
            cert.upper,
            cert.width(),
            elapsed.as_secs_f64(),
            if ok { "" } else { " FAILED" }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn ac2() -> Outcome {
    let lambda1 = ReductionFamilyMap::new(2, 1.0).unwrap().channel();
    let pair = channel_pair_from_ta(&ta_from_ktp(&lambda1).unwrap()).unwrap();
    let diff = pair.difference();
    let bell = diff.apply_partial(&max_entangled(2)).unwrap().trace_norm();
    let mut r = rng(2);
    let mut sep_max = f64::NEG_INFINITY;
    let mut sep_min = f64::INFINITY;
    for _ in 0..200 {
        let v = random::random_schmidt_rank(&mut r, (2, 2), 1);
        let s = BipartiteState::from_pure(&v, (2, 2)).unwrap();
        let t = diff.apply_partial(&s).unwrap().trace_norm();
        sep_max = sep_max.max(t);
        sep_min = sep_min.min(t);
    }
    let cptp = pair.phi1.require_cptp(1e-8).is_ok() && pair.phi2.require_cptp(1e-8).is_ok();
    let mut worst_margin: f64 = 0.0;
    for d in 2..=4usize {
        for k in 1..d {
            let map = ReductionFamilyMap::new(d, 1.0 / k as f64).unwrap().channel();
            let rep = binary_advantage(&max_entangled(d), k, &map, 32, 0).unwrap();
            let (df, kf) = (d as f64, k as f64);
            let want = rep.c * 2.0 * (df - kf) / (df * (df * kf - 1.0));
            worst_margin = worst_margin.max((rep.margin - want).abs());
        }
    }
    let pass = (pair.c - 2.0 / 3.0).abs() <= 1e-9
        && (bell - 2.0).abs() <= 1e-7
        && (sep_max - 4.0 / 3.0).abs() <= 1e-7
        && (sep_min - 4.0 / 3.0).abs() <= 1e-7
        && cptp
        && worst_margin <= 1e-6;
    outcome(
        pass,
        format!(
            "c = {:.12}, bell {:.12}, S1 range [{:.12}, {:.12}], isotropic margin error {:.1e}",
            pair.c, bell, sep_min, sep_max, worst_margin
        ),
    )
}

fn ac3() -> Outcome {
    let opts = SolverOptions::with_tol(1e-10);
    let (lambda, c) = witness_to_channel(&bell_witness(2, 1), (2, 2)).unwrap();
    let identity_ok = lambda.choi().max_abs_diff(ChannelRep::identity(2).choi()) < 1e-12;
    let task = build_task(lambda, c).unwrap();
    let p_bell = guess_with_bell(&task, &max_entangled(2)).unwrap();
    let sampled = bound_s_k(&task, 1, 200, 3, &opts).unwrap();
    let v = kron_vec(&basis_vector(2, 0), &basis_vector(2, 0));
    let product = guess_optimal(&task, &BipartiteState::from_pure(&v, (2, 2)).unwrap(), &opts).unwrap();
    let ceiling = sampled.empirical.max(product);
    let cert = robustness_bounds(&max_entangled(2), 1, &RobustnessConfig::default()).unwrap();
    let ratio = advantage_ratio_from(&max_entangled(2), &cert).unwrap();
    let pass = identity_ok
        && (p_bell - 1.0).abs() <= 1e-8
        && (sampled.bound - 0.5).abs() <= 1e-12
        && (ceiling - 0.5).abs() <= 1e-7
        && (ratio.ratio - 2.0).abs() <= 1e-5
        && (ratio.ratio - 1.0 - cert.lower).abs() <= 1e-5;
    outcome(
        pass,
        format!(
            "p_guess(bell) = {p_bell:.12}, S1 ceiling {ceiling:.10} (bound {}), ratio {:.9}, R in [{:.9}, {:.9}]",
            sampled.bound, ratio.ratio, cert.lower, cert.upper
        ),
    )
}

/// Robustness certificates for k = 1, 2 on the seeded two-qutrit states.
fn qutrit_certificates() -> (Vec<(BipartiteState, Vec<RobustnessCertificate>)>, Duration) {
    let cfg = RobustnessConfig::default();
    let start = Instant::now();
    let mut out = Vec::new();
    let mut r = rng(4);
    for _ in 0..20 {
        let rho = random::random_state(&mut r, (3, 3));
        let certs = (1..=2).map(|k| robustness_bounds(&rho, k, &cfg).unwrap()).collect();
        out.push((rho, certs));
    }
    (out, start.elapsed())
}

fn ac4(certs: &[(BipartiteState, Vec<RobustnessCertificate>)], cert_time: Duration) -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut worst: f64 = 0.0;
    let mut detected = 0;
    for (rho, cs) in certs {
        for cert in cs {
            let r = advantage_ratio_from(rho, cert).unwrap();
            let excess = r.ratio - 1.0;
            let ok = excess >= cert.lower - 1e-5 && excess <= cert.upper + 1e-5;
            pass &= ok;
            worst = worst.max(cert.lower - excess).max(excess - cert.upper);
            if cert.lower > 1e-6 {
                detected += 1;
            }
        }
    }
    let total = cert_time + start.elapsed();
    pass &= total <= Duration::from_secs(300);
    outcome(
        pass,
        format!(
            "40 cases, {detected} with positive lower bound, worst violation {worst:.1e}, {:.1}s",
            total.as_secs_f64()
        ),
    )
}

fn random_pair(r: &mut ChaCha8Rng, d_in: usize, d_out: usize) -> ChannelRep {
    let a = random::random_channel(r, d_in, d_out);
    let b = random::random_channel(r, d_in, d_out);
    a.sub(&b).unwrap()
}

fn ac5(certs: &[(BipartiteState, Vec<RobustnessCertificate>)]) -> Outcome {
    let mut r = rng(5);
    let mut notes = Vec::new();

    // Choi round trip against an explicit Kraus representation.
    let mut cj: f64 = 0.0;
    for i in 0..100 {
        let (d_in, d_out) = (2 + i % 2, 2 + (i / 2) % 2);
        let env = 2;
        let v = random::random_unitary(&mut r, d_out * env);
        let v = v.columns(0, d_in).into_owned();
        let kraus: Vec<CMatrix> = (0..env)
            .map(|e| CMatrix::from_fn(d_out, d_in, |p, i| v[(p * env + e, i)]))
            .collect();
        let ch = ChannelRep::from_kraus(&kraus).unwrap();
        let x = random::gaussian_matrix(&mut r, d_in, d_in);
        let direct = kraus.iter().fold(CMatrix::zeros(d_out, d_out), |acc, k| acc + k * &x * k.adjoint());
        cj = cj.max((ch.apply(&x).unwrap() - direct).camax());
        let rebuilt = ChannelRep::choi_of_map(d_in, d_out, |m| ch.apply(m).unwrap()).unwrap();
        cj = cj.max(rebuilt.choi().max_abs_diff(ch.choi()));
    }
    let cj_ok = cj <= 1e-9;
    notes.push(format!("CJ {cj:.1e}"));

    let mut bell: f64 = 0.0;
    for d in 2..=5 {
        let povm = bell_povm(d).unwrap();
        let sum = povm.iter().fold(HermitianOperator::zeros(d * d), |acc, m| &acc + m);
        bell = bell.max(sum.max_abs_diff(&HermitianOperator::identity(d * d)));
        for (i, a) in povm.iter().enumerate() {
            for (j, b) in povm.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                bell = bell.max((a.inner(b) - want).abs());
            }
        }
    }
    let bell_ok = bell <= 1e-10;
    notes.push(format!("Bell {bell:.1e}"));

    // Witnesses 1 − ψψ†/λ_max are exactly non-negative on product vectors.
    let mut pad: f64 = 0.0;
    let mut pad_ok = true;
    for i in 0..100 {
        let dims = (2 + i % 2, 2 + (i / 3) % 2);
        let psi = random::random_pure(&mut r, dims.0 * dims.1);
        let top = schmidt_decompose(&psi, dims).unwrap().coefficients[0];
        let top = top * top;
        let wt = &HermitianOperator::identity(dims.0 * dims.1) - &HermitianOperator::projector(&psi).scale(1.0 / top);
        let p = pad_witness(&wt, dims).unwrap();
        let marginal = partial_trace(&p.operator, p.dims, Subsystem::A).unwrap();
        pad = pad.max(marginal.max_abs_diff(&HermitianOperator::identity(dims.1).scale(p.w)));
        let rho = random::random_state(&mut r, dims);
        pad = pad.max((p.operator.inner(pad_state(&rho, p.n).operator()) - wt.inner(rho.operator())).abs());
        pad_ok &= p.operator.max_eigenvalue() <= 1.0 + 1e-12 && p.delta.min_eigenvalue() >= -1e-12;
    }
    pad_ok &= pad <= 1e-12;
    notes.push(format!("padding {pad:.1e}"));

    let opts = SolverOptions::with_tol(1e-10);
    let mut hel: f64 = 0.0;
    for i in 0..50 {
        let d = 2 + i % 3;
        let p = 0.1 + 0.8 * (i as f64 / 50.0);
        let a = random::random_density(&mut r, d).scale(p);
        let b = random::random_density(&mut r, d).scale(1.0 - p);
        let h = helstrom(&a, &b).unwrap();
        let (s, _) = guessing_probability_sdp(&[a, b], &opts).unwrap();
        hel = hel.max((h - s).abs());
    }
    let hel_ok = hel <= 1e-7;
    notes.push(format!("Helstrom {hel:.1e}"));

    // 1e-10 is at the edge of what the interior-point solver reaches in
    // double precision on these problems; 1e-9 is ample for a 1e-5 check.
    let opts = SolverOptions::with_tol(1e-9);
    let mut gap: f64 = 0.0;
    let mut dk_monotone = true;
    for i in 0..20 {
        let (d_in, d_out) = (2 + i % 2, 2 + (i / 2) % 2);
        let theta = random_pair(&mut r, d_in, d_out);
        let dn = diamond_norm(&theta, &opts).unwrap();
        let prof = knorm_profile(&theta, 8, i as u64).unwrap();
        let full = prof.values[d_in - 1].max(knorm_estimate(&theta, d_in, 16, 100 + i as u64).unwrap().value);
        gap = gap.max((dn - full).abs());
        dk_monotone &= prof.values.windows(2).all(|w| w[0] <= w[1] + 1e-12);
        dk_monotone &= prof.values.iter().all(|&v| v <= dn + 1e-6);
    }
    let dn_ok = gap <= 1e-5;
    notes.push(format!("diamond vs see-saw {gap:.1e}"));

    let mut hierarchy = true;
    for (_, cs) in certs {
        // R_{S_1} ≥ R_{S_2}: the k = 2 interval may not sit above the k = 1 one.
        hierarchy &= cs[1].lower <= cs[0].upper + 1e-6 && cs[1].upper <= cs[0].upper + 1e-6;
    }
    notes.push(format!("hierarchy {hierarchy}, D_k monotone {dk_monotone}"));

    outcome(
        cj_ok && bell_ok && pad_ok && hel_ok && dn_ok && hierarchy && dk_monotone,
        notes.join(", "),
    )
}

fn ac6() -> Outcome {
    let mut pass = true;
    let mut worst: f64 = 0.0;
    let mut levels = Vec::new();
    for d in 2..=4usize {
        for t in [1.0, 0.5, 1.0 / 3.0] {
            let (map, report) = reduction_family(d, t).unwrap();
            let want = ((1.0 / t + 1e-9).floor() as usize).min(d);
            pass &= report.level == want;
            for (m, l) in report.min_eigenvalues.iter().enumerate() {
                worst = worst.max((l - map.predicted_min_eigenvalue(m + 1)).abs());
            }
            levels.push(format!("d{d}/t{:.2}:{}", t, report.level));
        }
    }
    pass &= worst <= 1e-10;
    outcome(pass, format!("levels {}, eigenvalue error {worst:.1e}", levels.join(" ")))
}

fn main() {
    // `cargo test -- --list` style probes expect no output and success.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut all = true;
    let mut report = |name: &str, o: Outcome| {
        all &= o.pass;
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };
    report("AC1 robustness pinning", ac1());
    report("AC2 binary pipeline", ac2());
    report("AC3 multichannel identity case", ac3());
    let (certs, cert_time) = qutrit_certificates();
    report("AC4 sup-ratio sandwich", ac4(&certs, cert_time));
    report("AC5 structural suites", ac5(&certs));
    report("AC6 positivity-level detection", ac6());
    if !all {
        std::process::exit(1);
    }
}
