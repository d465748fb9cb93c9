//! One line per acceptance criterion. Exits non-zero if any is red.

use std::time::{Duration, Instant};

use matching_entropy::cli::{main_with_args, plateau_samples};
use matching_entropy::dynamics::*;
use matching_entropy::exact::{int, rat, FieldElement, Rational};
use matching_entropy::spectral::*;
use matching_entropy::symbolic::*;
use matching_entropy::windows::tuning_window;

use rayon::prelude::*;

type Outcome = Result<String, String>;

fn fe(r: &Rational) -> FieldElement {
    FieldElement::Rational(r.clone())
}

fn surd(a: Rational, b: Rational) -> FieldElement {
    FieldElement::quadratic(a, b, 5)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg.into()) }
}

fn within(t: Duration, limit: Duration) -> Result<(), String> {
    ensure(t <= limit, format!("took {t:.1?}, limit {limit:?}"))
}

fn entropy_coeff(slope: &SlopeSpec, g: &Rational) -> Result<Rational, String> {
    let (_, _, h) = metric_entropy(slope, &fe(g), DEFAULT_BUDGET).map_err(|e| format!("{g}: {e}"))?;
    h.coeff.and_then(|c| c.as_rational().cloned()).ok_or_else(|| format!("{g}: no exact coefficient"))
}

fn c1_pseudocenter_table() -> Outcome {
    let t0 = Instant::now();
    let rows = [
        (rat(1, 2), rat(1, 3), rat(2, 3)),
        (rat(1, 4), rat(2, 9), rat(1, 3)),
        (rat(7, 32), rat(7, 33), rat(2, 9)),
        (rat(3, 16), rat(2, 11), rat(1, 5)),
        (rat(9, 64), rat(4334, 16383), rat(1, 7)),
        (rat(1, 8), rat(1, 9), rat(2, 15)),
    ];
    let mut bad = Vec::new();
    for (xi, l, r) in rows {
        let rec = interval_from_pseudocenter(2, &xi).map_err(|e| e.to_string())?;
        if rec.xi_l != l || rec.xi_r != r {
            bad.push(format!("{xi} -> ({}, {}) expected ({l}, {r})", rec.xi_l, rec.xi_r));
        }
    }
    within(t0.elapsed(), Duration::from_secs(1))?;
    ensure(bad.is_empty(), bad.join("; "))?;
    Ok("6/6 rows exact".into())
}

fn c2_closed_form() -> Outcome {
    let slope = SlopeSpec::integer(2);
    let t0 = Instant::now();
    let mut got = Vec::new();
    let mut bad = Vec::new();
    for (g, want) in [(rat(-1, 2), rat(4, 13)), (rat(4, 5), rat(10, 19))] {
        let (part, dp, _) = metric_entropy(&slope, &fe(&g), DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let h = metric_entropy_rokhlin(&dp, &part, &slope, &fe(&g));
        let c = h.coeff.and_then(|c| c.as_rational().cloned()).ok_or("no coefficient")?;
        got.push(format!("h({g}) = {c} log 2"));
        if c != want {
            bad.push(format!("h({g}) = {c} log 2, expected {want} log 2"));
        }
    }
    within(t0.elapsed(), Duration::from_secs(5))?;
    ensure(bad.is_empty(), bad.join("; "))?;
    Ok(got.join(", "))
}

fn c3_three_atoms() -> Outcome {
    let slope = SlopeSpec::integer(2);
    let g = FieldElement::ratio(7, 10);
    let th = FieldElement::ratio(9, 10);
    let (z, o, half) = (FieldElement::zero(), FieldElement::one(), FieldElement::ratio(1, 2));
    let cert = detect_matching(&slope, &g, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let part = build_partition(&slope, &g, PartitionSource::Certificate(&cert)).map_err(|e| e.to_string())?;
    let td = transition_matrices(&slope, &g, &part).map_err(|e| e.to_string())?;
    let pi = vec![
        vec![z.clone(), o.clone(), th.clone()],
        vec![z.clone(), z.clone(), &o - &th],
        vec![o.clone(), o.clone(), th.clone()],
    ];
    let a = vec![
        vec![z.clone(), o.clone(), th.clone()],
        vec![z.clone(), z.clone(), &o - &th],
        vec![half.clone(), half.clone(), &th * &half],
    ];
    ensure(td.pi == pi, "Pi differs")?;
    ensure(td.a == a, "A differs")?;
    let dp = invariant_density(&td, &part).map_err(|e| e.to_string())?;
    let norm = &FieldElement::from_int(5) - &(&FieldElement::from_int(2) * &th);
    let left: Vec<FieldElement> = [1, 2, 2].iter().map(|&k| FieldElement::from_int(k).checked_div(&norm).unwrap()).collect();
    ensure(dp.values == left, format!("left eigenvector {:?}", dp.values.iter().map(|x| x.to_string()).collect::<Vec<_>>()))?;
    ensure(part.lengths() == vec![o.clone(), &o - &th, o.clone()], "right eigenvector differs")?;
    let av: Vec<FieldElement> = td.a.iter().map(|row| row.iter().zip(part.lengths()).fold(z.clone(), |s, (x, l)| &s + &(x * &l))).collect();
    ensure(av == part.lengths(), "lengths are not fixed by A")?;
    Ok("Pi, A, (1,2,2)/(5-2theta), (1,1-theta,1) exact".into())
}

fn c4_top_plateau() -> Outcome {
    let slope = SlopeSpec::integer(2);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let ht = topological_entropy_markov(&slope, &FieldElement::ratio(2, 3), DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure((ht.value - phi.ln()).abs() < 1e-10, format!("h_top(2/3) = {}", ht.value))?;
    // Markov parameters inside the plateau: endpoints of enumerated intervals
    let recs = enumerate_matching_intervals(2, &int(0), &rat(2, 3), 9).map_err(|e| e.to_string())?;
    let mut params: Vec<Rational> = recs
        .iter()
        .flat_map(|r| [r.xi_l.clone(), r.xi_r.clone()])
        .filter(|x| x >= &rat(1, 6) && x <= &rat(2, 3))
        .collect();
    params.sort();
    params.dedup();
    let step = (params.len() / 20).max(1);
    let params: Vec<Rational> = params.into_iter().step_by(step).take(20).collect();
    ensure(params.len() == 20, format!("only {} Markov parameters", params.len()))?;
    let mut hm = Vec::new();
    let mut htop = Vec::new();
    for g in &params {
        let (_, _, h) = metric_entropy(&slope, &fe(g), DEFAULT_BUDGET).map_err(|e| format!("{g}: {e}"))?;
        hm.push(h.value);
        htop.push(topological_entropy_markov(&slope, &fe(g), DEFAULT_BUDGET).map_err(|e| format!("{g}: {e}"))?.value);
    }
    let spread = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
    ensure(spread(&hm) < 1e-10, format!("h_mu spread {:e}", spread(&hm)))?;
    ensure(spread(&htop) < 1e-10, format!("h_top spread {:e}", spread(&htop)))?;
    let (b_lo, _) = conjugate_to_g(&FieldElement::ratio(2, 3), &slope);
    let (b_hi, _) = conjugate_to_g(&FieldElement::ratio(1, 6), &slope);
    ensure(b_lo == FieldElement::from_int(2) && b_hi == FieldElement::from_int(5), format!("beta image [{b_lo}, {b_hi}]"))?;
    Ok(format!(
        "h_top(2/3) - log phi = {:.1e}; 20 Markov points: h_mu spread {:.1e}, h_top spread {:.1e}; beta in [2,5]",
        ht.value - phi.ln(),
        spread(&hm),
        spread(&htop)
    ))
}

fn c5_oracle_equivalence() -> Outcome {
    let t0 = Instant::now();
    let slope = SlopeSpec::integer(2);
    let recs = enumerate_matching_intervals(2, &int(0), &rat(2, 3), 14).map_err(|e| e.to_string())?;
    let bad: Vec<String> = recs
        .par_iter()
        .filter_map(|r| {
            let idx = match matching_index(&r.w) {
                Ok(i) => i,
                Err(e) => return Some(format!("{}: {e}", r.xi)),
            };
            match detect_matching(&slope, &fe(&r.xi), DEFAULT_BUDGET) {
                Ok(c) if c.delta == idx && idx % 3 == 0 => None,
                Ok(c) => Some(format!("{}: index {idx}, detected {}", r.xi, c.delta)),
                Err(e) => Some(format!("{}: {e}", r.xi)),
            }
        })
        .collect();
    within(t0.elapsed(), Duration::from_secs(120))?;
    ensure(bad.is_empty(), format!("{} mismatches, first {:?}", bad.len(), bad.first()))?;
    Ok(format!("{} intervals, all Delta multiples of 3", recs.len()))
}

fn c6_bifurcation_characterization() -> Outcome {
    let t0 = Instant::now();
    let slope = SlopeSpec::integer(2);
    let bad: Vec<String> = (2i64..=1000)
        .into_par_iter()
        .flat_map_iter(|q| (1..q).map(move |p| (p, q)))
        .filter(|&(p, q)| num_integer::gcd(p, q) == 1 && 3 * p < 2 * q)
        .filter_map(|(p, q)| {
            let g = rat(p, q);
            // orbits near 0 need more than the default budget to match
            let matched = detect_matching(&slope, &fe(&g), 2000).is_ok();
            let member = bifurcation_member(2, &g).ok()? == Membership::Member;
            (matched == member).then(|| format!("{g}"))
        })
        .collect();
    let t = t0.elapsed();
    ensure(bad.is_empty(), format!("{} disagreements, e.g. {:?}", bad.len(), bad.first()))?;
    within(t, Duration::from_secs(120))?;
    Ok(format!("all p/q with q <= 1000 in (0, 2/3) agree ({t:.1?})"))
}

fn c7_period_doubling() -> Outcome {
    let recs = enumerate_matching_intervals(2, &int(0), &rat(2, 3), 12).map_err(|e| e.to_string())?;
    let mut seeds: Vec<&PseudocenterRecord> = recs.iter().collect();
    seeds.sort_by_key(|r| (r.w.len(), r.xi.clone()));
    let seeds = &seeds[..100.min(seeds.len())];
    ensure(seeds.len() == 100, "fewer than 100 pseudocenters")?;
    for seed in seeds {
        let chain = cascade(2, &seed.xi, 3).map_err(|e| format!("{}: {e}", seed.xi))?;
        let mut parent = *seed;
        let mut lens = vec![seed.w.len()];
        for child in &chain {
            ensure(child.xi_r == parent.xi_l, format!("{}: child xiR {} != parent xiL {}", seed.xi, child.xi_r, parent.xi_l))?;
            ensure(child.delta == 0, format!("{}: child Delta {}", child.xi, child.delta))?;
            lens.push(child.w.len());
            parent = child;
        }
        for n in 0..lens.len() - 2 {
            ensure(lens[n + 2] == lens[n + 1] + 2 * lens[n], format!("{}: lengths {lens:?}", seed.xi))?;
        }
    }
    Ok("100 seeds x 3 generations adjacent, neutral, l(n+2) = l(n+1) + 2 l(n)".into())
}

fn c8_coverage() -> Outcome {
    let recs = enumerate_matching_intervals(2, &int(0), &rat(2, 3), 20).map_err(|e| e.to_string())?;
    let total: Rational = recs.iter().map(|r| &r.xi_r - &r.xi_l).sum();
    let frac = total / rat(2, 3);
    let shown = matching_entropy::exact::rational_to_f64(&frac);
    ensure(shown >= 0.99, format!("{} intervals cover {:.4} of [0, 2/3], need 0.99", recs.len(), shown))?;
    Ok(format!("{} intervals cover {shown:.4}", recs.len()))
}

fn c9_reciprocal_affinity() -> Outcome {
    let slope = SlopeSpec::integer(2);
    let mut worst = (0.0f64, 0.0f64);
    for (a, b) in [(rat(2, 9), rat(1, 3)), (rat(1, 9), rat(2, 15))] {
        let ln2 = 2f64.ln();
        let ha = entropy_coeff(&slope, &a)?;
        let hb = entropy_coeff(&slope, &b)?;
        let f = matching_entropy::exact::rational_to_f64;
        let mut pts = vec![(f(&a), f(&ha) * ln2)];
        for g in plateau_samples(&a, &b, 3) {
            let direct = f(&entropy_coeff(&slope, &g)?) * ln2;
            let interp = metric_entropy_interp(f(&ha) * ln2, f(&hb) * ln2, f(&a), f(&b), f(&g)).map_err(|e| e.to_string())?;
            worst.0 = worst.0.max((direct - interp).abs());
            pts.push((f(&g), direct));
        }
        pts.push((f(&b), f(&hb) * ln2));
        let (x0, y0) = (pts[0].0, 1.0 / pts[0].1);
        let (x1, y1) = (pts[pts.len() - 1].0, 1.0 / pts[pts.len() - 1].1);
        for &(x, h) in &pts[1..pts.len() - 1] {
            let line = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            worst.1 = worst.1.max((1.0 / h - line).abs());
        }
    }
    ensure(worst.0 < 1e-12, format!("interpolation error {:e}", worst.0))?;
    ensure(worst.1 < 1e-12, format!("collinearity error {:e}", worst.1))?;
    Ok(format!("interpolation error {:.1e}, collinearity error {:.1e}", worst.0, worst.1))
}

fn c10_plateau_and_window() -> Outcome {
    let mut out = Vec::new();
    let code = main_with_args(["matching", "plateaux", "--depth", "8", "--samples", "3"], &mut out);
    ensure(code == 0, format!("plateaux exited {code}"))?;
    let text = String::from_utf8(out).map_err(|e| e.to_string())?;
    let row = text.lines().find(|l| l.starts_with("125/1152,1/9,")).ok_or("no [125/1152, 1/9] row")?;
    ensure(row.contains("neutralWindow") && row.contains(",true,"), format!("row {row}"))?;

    let w = |t: &str| Word::parse(t, 2).unwrap();
    let xi_t = eventually_periodic_value(&w("000011101"), &w("11110000"));
    let xi_r = w("00001111").repeating_value();
    for (x, pre, per) in [(&xi_t, "000011101", "11110000"), (&xi_r, "", "00001111")] {
        let (p, q) = eventually_periodic_expansion(2, x).map_err(|e| e.to_string())?;
        ensure(p.to_string() == pre && q.to_string() == per, format!("{x} expands as {p}({q})"))?;
    }
    let seed = interval_from_pseudocenter(2, &w("00001111").value()).map_err(|e| e.to_string())?;
    let win = tuning_window(&seed);
    ensure(win.xi_t == xi_t && win.xi_r == xi_r, format!("window [{}, {}]", win.xi_t, win.xi_r))?;
    // .v'w'(w')^n 11110 accumulates on xi_T from outside, with Delta != 0
    for n in 1..=4 {
        let x = w(&format!("000011101{}11110", "11110000".repeat(n))).value();
        ensure(is_pseudocenter(2, &x).map_err(|e| e.to_string())? == PseudocenterCheck::Yes, format!("{x} is not a pseudocenter"))?;
        let r = interval_from_pseudocenter(2, &x).map_err(|e| e.to_string())?;
        ensure(r.delta != 0 && x < xi_t, format!("{x}: Delta {} inside the window", r.delta))?;
        let gap = &xi_t - &x;
        ensure(gap < Rational::new(1.into(), num_traits::pow(2.into(), 8 * n + 8)), format!("{x} is {gap} from xi_T"))?;
    }
    // the quoted right-hand family stays inside the window and has another limit
    let right_limit = eventually_periodic_value(&w("0000111011"), &w("11100001"));
    let right_delta = interval_from_pseudocenter(2, &w("000011101111100001").value()).map_err(|e| e.to_string())?.delta;
    Ok(format!(
        "plateau row verified; xi_T, xi_R round-trip; left family -> xi_T; right family .0000111011(11100001)^n has Delta {right_delta} and limit {right_limit} != xi_R (not asserted)"
    ))
}

fn c11_quadratic_slope() -> Outcome {
    let t0 = Instant::now();
    let slope = SlopeSpec::parse("quad:1+1*sqrt(5)").map_err(|e| e.to_string())?;
    let found = grid_search(&slope, &int(0), &int(1), 400, 60);
    let target = FieldElement::ratio(11, 20);
    let (_, cert) = found.iter().find(|(_, c)| c.contains(&target)).ok_or("no interval contains 0.55")?;
    let lo = surd(int(-4), int(2));
    let hi = surd(int(-2), rat(6, 5));
    ensure(
        (cert.kappa_minus, cert.kappa_plus) == (5, 6),
        format!("exponents ({}, {})", cert.kappa_minus, cert.kappa_plus),
    )?;
    ensure(cert.lo == Endpoint::Finite(lo) && cert.hi == Endpoint::Finite(hi), format!("interval ({}, {})", cert.lo, cert.hi))?;
    within(t0.elapsed(), Duration::from_secs(30))?;
    Ok(format!("({}, {}) with (5,6) from {} grid certificates", cert.lo, cert.hi, found.len()))
}

fn c12_monotonicity() -> Outcome {
    let slope = SlopeSpec::integer(2);
    let recs = enumerate_matching_intervals(2, &int(0), &rat(2, 3), 10).map_err(|e| e.to_string())?;
    let bad: Vec<String> = recs
        .par_iter()
        .filter_map(|r| {
            let pts = plateau_samples(&r.xi_l, &r.xi_r, 3);
            let h: Vec<Rational> = pts.iter().map(|g| entropy_coeff(&slope, g)).collect::<Result<_, _>>().ok()?;
            let hf: Vec<f64> = h.iter().map(|c| matching_entropy::exact::rational_to_f64(c) * 2f64.ln()).collect();
            let ok = match r.delta.signum() {
                1 => h.windows(2).all(|p| p[0] < p[1]),
                -1 => h.windows(2).all(|p| p[0] > p[1]),
                _ => hf.windows(2).all(|p| (p[0] - p[1]).abs() < 1e-12),
            };
            (!ok).then(|| format!("{} (Delta {})", r.xi, r.delta))
        })
        .collect();
    ensure(bad.is_empty(), format!("{} intervals fail, e.g. {:?}", bad.len(), bad.first()))?;
    Ok(format!("{} intervals", recs.len()))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 12] = [
        (1, "pseudocenter table", c1_pseudocenter_table),
        (2, "closed-form entropy", c2_closed_form),
        (3, "three-atom matrices", c3_three_atoms),
        (4, "top plateau", c4_top_plateau),
        (5, "index oracle, denominators <= 2^14", c5_oracle_equivalence),
        (6, "matching iff not in E, q <= 1000", c6_bifurcation_characterization),
        (7, "period doubling", c7_period_doubling),
        (8, "depth-20 coverage", c8_coverage),
        (9, "1/h affinity", c9_reciprocal_affinity),
        (10, "plateau [125/1152, 1/9] and window words", c10_plateau_and_window),
        (11, "quadratic slope", c11_quadratic_slope),
        (12, "monotonicity at depth 10", c12_monotonicity),
    ];
    let mut red = 0;
    for (n, name, f) in criteria {
        let t0 = Instant::now();
        let res = f();
        let t = t0.elapsed();
        match res {
            Ok(msg) => println!("criterion {n:>2} PASS  {name}: {msg} [{t:.2?}]"),
            Err(msg) => {
                red += 1;
                println!("criterion {n:>2} FAIL  {name}: {msg} [{t:.2?}]");
            }
        }
    }
    println!("{} of 12 criteria pass", 12 - red);
    if red > 0 {
        std::process::exit(1);
    }
}
