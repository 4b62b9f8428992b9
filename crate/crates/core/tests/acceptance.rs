//! Acceptance criteria 1–11. Each prints one PASS/FAIL line with the measured
//! quantity, its pinned tolerance and the wall time; the test fails if any does.

use hypvortex::gauge_holonomy::{
    apply_gauge, fhp_t, fhp_t_simplified, holonomy, holonomy_parameter, monodromy_relations, pair_from_chi,
    GaugeChi, MonodromyFamily,
};
use hypvortex::instanton::{adhm_connection, curvature_densities, fd_curvature, AdhmData, Duality};
use hypvortex::potentials::{biharmonic_log4, harmonic_residual4};
use hypvortex::quaternion::density;
use hypvortex::reduction::{chern_reduction_check, reduced_action};
use hypvortex::tolerances as tol;
use hypvortex::vortex::{chern1, higgs_zeros, vortex_residuals, Region};
use hypvortex::{Complex64, Cut, HyperPoint, Kind, Model, QuadConfig, Quaternion, SuperPotential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(id: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let out = f();
    let el = t.elapsed();
    let in_time = el <= limit;
    let pass = out.pass && in_time;
    println!(
        "criterion {id:>2} {:<4} {name}: {} [{:.2} s, limit {} s{}]",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        el.as_secs_f64(),
        limit.as_secs(),
        if in_time { "" } else { ", over time" }
    );
    pass
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn norm2(x: [f64; 4]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Uniform in `|x| ≤ 5`, at least 0.1 from every center.
fn ball_point(r: &mut ChaCha8Rng, centers: &[Quaternion]) -> [f64; 4] {
    loop {
        let x: [f64; 4] = std::array::from_fn(|_| r.gen_range(-5.0..5.0));
        let far = centers
            .iter()
            .all(|c| norm2(std::array::from_fn(|i| x[i] - c.to_array()[i])) > 0.01);
        if norm2(x) <= 25.0 && far {
            return x;
        }
    }
}

fn disc_point(r: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let w = Complex64::new(r.gen_range(-0.97..0.97), r.gen_range(-0.97..0.97));
        if w.norm() < 0.97 && w.norm() > 1e-2 && w.im.abs() > 1e-2 {
            return w;
        }
    }
}

fn random_quaternion(r: &mut ChaCha8Rng, real: bool) -> Quaternion {
    let w = r.gen_range(-2.0..2.0);
    if real {
        Quaternion::real(w)
    } else {
        Quaternion::new(w, r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0))
    }
}

fn thooft_family(r: &mut ChaCha8Rng) -> Vec<SuperPotential> {
    let mut out = Vec::new();
    for k in 1..=3 {
        for real in [true, false] {
            let centers: Vec<Quaternion> = (0..k).map(|_| random_quaternion(r, real)).collect();
            let scales: Vec<f64> = (0..k).map(|_| r.gen_range(0.5..1.5)).collect();
            out.push(SuperPotential::thooft(centers, scales).unwrap());
        }
    }
    out
}

fn centers_of(p: &SuperPotential) -> Vec<Quaternion> {
    match p {
        SuperPotential::Thooft4 { centers, .. } => centers.clone(),
        _ => vec![],
    }
}

fn two_zero() -> SuperPotential {
    SuperPotential::halfplane_from_zeros(&[Complex64::new(0.0, 1.0), Complex64::new(1.0, 2.0)]).unwrap()
}

fn basic_vortex() -> SuperPotential {
    SuperPotential::halfplane(vec![0.0], vec![1.0]).unwrap()
}

fn disc_family(c: f64) -> SuperPotential {
    SuperPotential::disc_family(c, Complex64::new(1.0, 0.0), Cut::P2).unwrap()
}

fn c1_1() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for p in thooft_family(&mut r) {
        let cs = centers_of(&p);
        for _ in 0..200 {
            let x = ball_point(&mut r, &cs);
            let (_, off_sd) = curvature_densities(&p, x, Duality::SD).unwrap();
            let (off_asd, _) = curvature_densities(&p, x, Duality::ASD).unwrap();
            worst = worst.max(off_sd).max(off_asd);
        }
    }
    let control = SuperPotential::Quadric { c0: 1.0, c2: 1.0 };
    let mut rel = 0.0f64;
    for _ in 0..200 {
        let x = ball_point(&mut r, &[]);
        let (_, m) = curvature_densities(&control, x, Duality::SD).unwrap();
        let want = 0.375 * (harmonic_residual4(&control, x).unwrap() / control.value4(x).unwrap()).powi(2);
        rel = rel.max((m - want).abs() / want);
    }
    Outcome {
        pass: worst < tol::DUALITY_RESIDUAL && rel < tol::CONTROL_RELATIVE,
        detail: format!(
            "max off-duality density {worst:.2e} (< {:e}); control rel. error {rel:.2e} (< {:e})",
            tol::DUALITY_RESIDUAL,
            tol::CONTROL_RELATIVE
        ),
    }
}

fn c2_density() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(102);
    let mut pots = thooft_family(&mut r);
    pots.push(SuperPotential::Lifted(Box::new(disc_family(2.5))));
    pots.push(SuperPotential::Lifted(Box::new(SuperPotential::Fhp1)));
    pots.push(SuperPotential::Lifted(Box::new(SuperPotential::Fhp2)));
    let mut worst = 0.0f64;
    let mut bad = 0usize;
    for p in &pots {
        let cs = centers_of(p);
        let mut n = 0;
        while n < 200 {
            let x = ball_point(&mut r, &cs);
            // lifted potentials are sampled where they are defined
            let (Ok((sp, _)), Ok(bh)) = (curvature_densities(p, x, Duality::SD), biharmonic_log4(p, x)) else {
                continue;
            };
            n += 1;
            if !(sp > 0.0) {
                bad += 1;
                continue;
            }
            worst = worst.max((sp + 0.25 * bh).abs() / sp);
        }
    }
    Outcome {
        pass: worst < tol::DENSITY_IDENTITY_RELATIVE && bad == 0,
        detail: format!(
            "{} potentials x 200 points, max rel. error {worst:.2e} (< {:e})",
            pots.len(),
            tol::DENSITY_IDENTITY_RELATIVE
        ),
    }
}

fn c3_c2(label: &str, p: SuperPotential, want: f64) -> Outcome {
    match hypvortex::instanton::chern2(&p, Duality::SD, &QuadConfig::default()) {
        Ok(res) => Outcome {
            pass: (res.value - want).abs() < tol::C2_ABSOLUTE,
            detail: format!("{label}: c2 = {:.6} ± {:.1e} (want {want} ± {:e})", res.value, res.error, tol::C2_ABSOLUTE),
        },
        Err(e) => Outcome {
            pass: false,
            detail: format!("{label}: {e}"),
        },
    }
}

fn c4_vortex() -> Outcome {
    let pots = [
        ("basic", basic_vortex()),
        ("two-zero", two_zero()),
        ("fhp1", SuperPotential::Fhp1),
        ("fhp2", SuperPotential::Fhp2),
        ("c=1", disc_family(1.0)),
        ("c=2", disc_family(2.0)),
        ("c=2.5", disc_family(2.5)),
        ("c=3.7", disc_family(3.7)),
    ];
    let mut r = ChaCha8Rng::seed_from_u64(104);
    let mut worst = (0.0f64, "");
    for (name, p) in &pots {
        let mut n = 0;
        while n < 200 {
            let pt = HyperPoint::disc(disc_point(&mut r));
            let Ok((r1, r2)) = vortex_residuals(p, pt, Kind::Vortex) else { continue };
            n += 1;
            if r1.max(r2) > worst.0 || !(r1.max(r2) >= 0.0) {
                worst = (r1.max(r2), name);
            }
        }
    }
    Outcome {
        pass: worst.0 < tol::VORTEX_RESIDUAL,
        detail: format!(
            "8 potentials x 200 points, max residual {:.2e} ({}) (< {:e})",
            worst.0,
            worst.1,
            tol::VORTEX_RESIDUAL
        ),
    }
}

fn c5_c1() -> Outcome {
    let cases = [
        ("basic", basic_vortex(), 1.0),
        ("fhp1", SuperPotential::Fhp1, 1.5),
        ("fhp2", SuperPotential::Fhp2, 1.5),
        ("c=1", disc_family(1.0), 0.0),
        ("c=1.5", disc_family(1.5), 0.5),
        ("c=2", disc_family(2.0), 1.0),
        ("c=2.5", disc_family(2.5), 1.5),
        ("c=3.7", disc_family(3.7), 2.7),
    ];
    let cfg = QuadConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, p, want) in cases {
        let t = Instant::now();
        let got = chern1(&p, &cfg, Model::Disc);
        let slow = t.elapsed() > secs(30);
        match got {
            Ok(res) => {
                pass &= (res.value - want).abs() < tol::C1_ABSOLUTE && !slow;
                parts.push(format!("{name} {:.6}", res.value));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name} {e}"));
            }
        }
    }
    Outcome {
        pass,
        detail: format!("c1: {} (± {:e}, < 30 s each)", parts.join(", "), tol::C1_ABSOLUTE),
    }
}

fn c6_reduction() -> Outcome {
    let cfg = QuadConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, p) in [("basic", basic_vortex()), ("two-zero", two_zero())] {
        match chern_reduction_check(&p, &cfg) {
            Ok((c2, c1)) => {
                pass &= (c2.value - c1.value).abs() < tol::REDUCTION_CHERN;
                parts.push(format!("{name} c2 {:.6} c1 {:.6}", c2.value, c1.value));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name} {e}"));
            }
        }
    }
    Outcome {
        pass,
        detail: format!("{} (|c2 − c1| < {:e})", parts.join("; "), tol::REDUCTION_CHERN),
    }
}

fn c7_zeros() -> Outcome {
    let want = [Complex64::new(0.0, 1.0), Complex64::new(1.0, 2.0)];
    let p = two_zero();
    let region = Region::Rect {
        lo: Complex64::new(-3.0, 0.1),
        hi: Complex64::new(4.0, 5.0),
    };
    let zeros = match higgs_zeros(&p, region, 16) {
        Ok(z) => z,
        Err(e) => {
            return Outcome {
                pass: false,
                detail: e.to_string(),
            }
        }
    };
    let err = want
        .iter()
        .map(|w| zeros.iter().map(|z| (z.point.to_half_plane() - w).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0f64, f64::max);
    let c1 = chern1(&p, &QuadConfig::default(), Model::HalfPlane).map(|r| r.value).unwrap_or(f64::NAN);
    let simple = zeros.iter().all(|z| z.multiplicity == 1);
    Outcome {
        pass: zeros.len() == 2 && simple && err < tol::HIGGS_ZERO && (c1 - 2.0).abs() < tol::C1_ABSOLUTE,
        detail: format!(
            "{} zeros found, max distance {err:.2e} (< {:e}), c1 {c1:.6}",
            zeros.len(),
            tol::HIGGS_ZERO
        ),
    }
}

const PAIR_EXCLUSION: f64 = 1e-2;

fn c8_gauge() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(108);
    let chi = GaugeChi::ImPoly(vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    let mut pair_res = 0.0f64;
    let mut pair_gauge = 0.0f64;
    let mut n = 0;
    while n < 200 {
        let p = HyperPoint::disc(disc_point(&mut r));
        // the pair is singular where e^{2iχ} = 1
        if (chi.unit(p).unwrap() - 1.0).norm() < PAIR_EXCLUSION {
            continue;
        }
        let Ok((plus, minus)) = pair_from_chi(&chi, p, 1) else { continue };
        n += 1;
        for j in [&plus, &minus] {
            let (a, b) = j.residuals();
            pair_res = pair_res.max(a).max(b);
        }
        let moved = apply_gauge(&plus.sample(), &chi).unwrap();
        let m = minus.sample();
        let d = (moved.a[0] - m.a[0]).abs().max((moved.a[1] - m.a[1]).abs()).max((moved.phi - m.phi).norm());
        let scale = 1.0 + m.a[0].abs().max(m.a[1].abs()).max(m.phi.norm());
        pair_gauge = pair_gauge.max(d / scale);
    }
    let mut t_err = 0.0f64;
    for _ in 0..500 {
        let w = disc_point(&mut r);
        let (a1, a2) = fhp_t(w).unwrap();
        let (b1, b2) = fhp_t_simplified(w).unwrap();
        t_err = t_err.max((a1 - b1).abs()).max((a2 - b2).abs());
    }
    let mut mono = 0.0f64;
    for c in [1.5, 2.5, 3.7] {
        let fam = MonodromyFamily::new(c).unwrap();
        let mut n = 0;
        while n < 100 {
            let Ok((f, a)) = monodromy_relations(&fam, disc_point(&mut r)) else { continue };
            n += 1;
            mono = mono.max(f).max(a);
        }
    }
    Outcome {
        pass: pair_res < tol::PAIR_GAUGE && pair_gauge < tol::PAIR_GAUGE && t_err < tol::FHP_FORMS && mono < tol::MONODROMY,
        detail: format!(
            "pair residual {pair_res:.2e}, gauge relation {pair_gauge:.2e} (< {:e}, |e^(2iχ) − 1| ≥ {PAIR_EXCLUSION:e}); T forms {t_err:.2e} (< {:e}); monodromy {mono:.2e} (< {:e})",
            tol::PAIR_GAUGE,
            tol::FHP_FORMS,
            tol::MONODROMY
        ),
    }
}

fn c9_holonomy() -> Outcome {
    let mut pass = holonomy_parameter(2.5) == 0.25;
    let mut parts = Vec::new();
    for c in [2.0, 2.5, 3.7] {
        let fam = MonodromyFamily::new(c).unwrap();
        let lim = Complex64::from_polar(1.0, 2.0 * PI * c);
        let errs: Vec<f64> = [0.1, 0.01, 1e-3]
            .iter()
            .map(|&r| holonomy(&fam, r, 512).map(|h| (h - lim).norm()).unwrap_or(f64::NAN))
            .collect();
        pass &= errs[0] > errs[1] && errs[1] > errs[2] && errs[2] < tol::HOLONOMY;
        parts.push(format!("c={c}: {:.1e} {:.1e} {:.1e}", errs[0], errs[1], errs[2]));
    }
    Outcome {
        pass,
        detail: format!(
            "|hol − e^(2πic)| at r = 0.1, 0.01, 0.001: {} (< {:e}); α(2.5) = {}",
            parts.join("; "),
            tol::HOLONOMY,
            holonomy_parameter(2.5)
        ),
    }
}

fn c10_adhm() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(110);
    let mut worst = 0.0f64;
    for data in [
        AdhmData::new(vec![0.3], vec![1.1]).unwrap(),
        AdhmData::new(vec![-1.0, 1.5], vec![0.7, 1.3]).unwrap(),
    ] {
        let rho = data.potential();
        let cs = centers_of(&rho);
        for _ in 0..50 {
            let x = loop {
                let x = ball_point(&mut r, &cs);
                if norm2(x) < 9.0 {
                    break x;
                }
            };
            let f = fd_curvature(&|y| adhm_connection(&data, y), x, 1e-3).unwrap();
            let (sp, _) = curvature_densities(&rho, x, Duality::SD).unwrap();
            worst = worst.max((density(&f) - sp).abs() / sp);
        }
    }
    Outcome {
        pass: worst < tol::ADHM_RELATIVE,
        detail: format!("k = 1, 2 x 50 points, max rel. density error {worst:.2e} (< {:e})", tol::ADHM_RELATIVE),
    }
}

fn c11_action() -> Outcome {
    let cfg = QuadConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, p) in [("basic", basic_vortex()), ("fhp1", SuperPotential::Fhp1), ("fhp2", SuperPotential::Fhp2)] {
        let act = reduced_action(&p, Kind::Vortex, &cfg);
        let c1 = chern1(&p, &cfg, Model::Disc);
        match (act, c1) {
            (Ok(a), Ok(c)) => {
                let rel = (a.value - 4.0 * PI * c.value).abs() / (4.0 * PI * c.value);
                pass &= rel < tol::ACTION_RELATIVE;
                parts.push(format!("{name} action/4π {:.6} c1 {:.6}", a.value / (4.0 * PI), c.value));
            }
            (a, c) => {
                pass = false;
                parts.push(format!("{name} {:?} {:?}", a.err(), c.err()));
            }
        }
    }
    Outcome {
        pass,
        detail: format!("{} (rel. < {:e})", parts.join("; "), tol::ACTION_RELATIVE),
    }
}

#[test]
fn acceptance_criteria() {
    let basic = SuperPotential::basic_instanton(0.0, 1.0).unwrap();
    let two = SuperPotential::thooft(vec![Quaternion::real(0.0), Quaternion::real(3.0)], vec![1.0, 1.0]).unwrap();
    let results = [
        run(1, "duality residuals", secs(10), c1_1),
        run(2, "density identity", secs(10), c2_density),
        run(3, "c2 basic instanton", secs(60), || c3_c2("basic", basic, 1.0)),
        run(3, "c2 two-center 't Hooft", secs(60), || c3_c2("two-center", two, 2.0)),
        run(4, "vortex residuals", secs(10), c4_vortex),
        run(5, "c1 values", secs(240), c5_c1),
        run(6, "c2 of lift equals c1", secs(120), c6_reduction),
        run(7, "Higgs zeros", secs(30), c7_zeros),
        run(8, "gauge machinery", secs(30), c8_gauge),
        run(9, "holonomy", secs(30), c9_holonomy),
        run(10, "ADHM cross-check", secs(30), c10_adhm),
        run(11, "energy reduction", secs(60), c11_action),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    assert_eq!(failed, 0, "{failed} acceptance line(s) failed");
}
