//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//! Built with `harness = false` so the lines always reach the console.

mod support;

use std::time::Instant;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use sparsefac::dense::DensePoly3;
use sparsefac::divisibility::DivBackend;
use sparsefac::engine::{constant_degree_factors, monic_point, multiplicity_by_division, project, sparse_factors};
use sparsefac::factor::{factor_bivariate, factor_lowvar, factor_monic, factor_trivariate, factor_univariate_q};
use sparsefac::irredproj::{constant_degree_oracle, su_oracle, GridMode, IrredProjOracle};
use sparsefac::isolation::{
    apply_phi, find_isolating_prime, is_injective_pairwise, monomials_up_to, psi_invert, psi_map, recover_from_phi,
    IsolationScheme,
};
use sparsefac::parse::{parse_poly_n, parse_poly_vars, parse_rational, render_poly};
use sparsefac::pit::{interpolation_plan, sparse_interpolate};
use sparsefac::{Config, Monomial, SparsePoly};
use sparsefac_cli::{run, Outcome};

use support::*;

fn cli(args: &[&str]) -> Outcome {
    let mut v = vec!["sparsefac".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    run(&v, None)
}

fn json(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or(Value::Null)
}

/// Factor list from CLI JSON, read back in `n` variables.
fn read_list(out: &Outcome, n: usize) -> Option<(Q, Vec<(SparsePoly, u32)>)> {
    if out.code != 0 {
        return None;
    }
    let v = json(out);
    let scalar = parse_rational(v["scalar"].as_str()?).ok()?;
    let mut fs = Vec::new();
    for item in v["factors"].as_array()? {
        let g = parse_poly_n(item["poly"].as_str()?, n).ok()?;
        fs.push((g, item["multiplicity"].as_u64()? as u32));
    }
    Some((scalar, fs))
}

struct Tally {
    total: usize,
    bad: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { total: 0, bad: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.bad.push(what());
        }
    }

    fn ok(&self) -> bool {
        self.bad.is_empty() && self.total > 0
    }

    fn summary(&self) -> String {
        let mut s = format!("{}/{} exact", self.total - self.bad.len(), self.total);
        if let Some(first) = self.bad.first() {
            s.push_str(&format!("; first failure: {first}"));
        }
        s
    }
}

/// Distinct low-degree irreducibles with exponents.
fn low_factors(rng: &mut ChaCha8Rng, n: usize, count: usize, max_e: u32) -> Vec<(SparsePoly, u32)> {
    let mut out: Vec<(SparsePoly, u32)> = Vec::new();
    while out.len() < count {
        let d = rng.gen_range(1..=2);
        let g = random_low_irreducible(rng, n, d);
        if out.iter().any(|(h, _)| *h == g) {
            continue;
        }
        out.push((g, rng.gen_range(1..=max_e)));
    }
    out
}

fn constant_degree_completeness(gate: &mut Gate) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut t = Tally::new();
    for i in 0..100 {
        let n = 2 + i % 4;
        let a1 = rng.gen_range(1..=2);
        let gs = low_factors(&mut rng, n, a1, 3);
        let h = random_cubic_irreducible(&mut rng, n);
        let f = &product(n, &gs) * &h;
        let text = render_poly(&f);
        let mut args = vec!["factor-cd", "--delta", "2"];
        if i % 10 == 0 {
            args.push("--witness");
        }
        args.push(&text);
        let out = cli(&args);
        let got = read_list(&out, n);
        if let Some((_, fs)) = &got {
            gate.check_all(&f, fs);
        }
        let ok = got.as_ref().map(|(_, fs)| normalized(fs) == normalized(&gs)).unwrap_or(false);
        t.record(ok, || format!("{text}: {}{}", out.stdout.trim(), out.stderr.trim()));
    }
    (t.ok(), t.summary())
}

fn promise_path(gate: &mut Gate) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut t = Tally::new();
    for i in 0..100 {
        let n = 2 + i % 4;
        let a1 = rng.gen_range(1..=3);
        let gs = low_factors(&mut rng, n, a1, 2);
        let c = q(nonzero(&mut rng, 5));
        let f = product(n, &gs).scale(&c);
        let text = render_poly(&f);
        let a = cli(&["factor-cd-promise", "--delta", "2", &text]);
        let b = cli(&["factor-cd", "--delta", "2", &text]);
        let (la, lb) = (read_list(&a, n), read_list(&b, n));
        if let Some((_, fs)) = &la {
            gate.check_all(&f, fs);
        }
        let ok = match (&la, &lb) {
            (Some(x), Some(y)) => {
                x == y && normalized(&x.1) == normalized(&gs) && product(n, &x.1).scale(&x.0) == f
            }
            _ => false,
        };
        t.record(ok, || format!("{text}: {} vs {}", a.stdout.trim(), b.stdout.trim()));
    }
    let mut v = Tally::new();
    for i in 0..20 {
        let n = 2 + i % 4;
        let a1 = rng.gen_range(0..=2);
        let gs = low_factors(&mut rng, n, a1, 2);
        let h = random_cubic_irreducible(&mut rng, n);
        let f = &product(n, &gs) * &h;
        let text = render_poly(&f);
        let out = cli(&["factor-cd-promise", "--delta", "2", &text]);
        v.record(out.code == 2 && out.stderr.contains("promise violation"), || format!("{text}: exit {}", out.code));
    }
    (t.ok() && v.ok(), format!("agreement {}; violations raised {}", t.summary(), v.summary()))
}

fn multiplicity() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut t = Tally::new();
    let worked = cli(&["multiplicity", "z1^3 + 2*z1^2*z2 + z1*z2^2", "z1 + z2"]);
    t.record(json(&worked)["multiplicity"] == 2, || format!("worked case gave {}", worked.stdout.trim()));
    for i in 0..199 {
        let n = 1 + i % 4;
        let a1 = rng.gen_range(1..=2);
        let g = random_low_irreducible(&mut rng, n, a1);
        let e = rng.gen_range(0..=3);
        let mut r = SparsePoly::one(n);
        for _ in 0..rng.gen_range(0..=2) {
            let h = if rng.gen_bool(0.3) {
                random_cubic_irreducible(&mut rng, n.max(2)).embed(n.max(2), &(0..n.max(2)).collect::<Vec<_>>())
            } else {
                let a1 = rng.gen_range(1..=2);
                random_low_irreducible(&mut rng, n, a1)
            };
            if h.nvars() == n && h != g {
                r = &r * &h;
            }
        }
        let f = &g.pow(e) * &r;
        let text_f = render_poly(&f);
        let text_g = render_poly(&g);
        let out = cli(&["multiplicity", &text_f, &text_g]);
        let got = json(&out)["multiplicity"].as_u64();
        let by_div = multiplicity_by_division(&f, &g).ok().map(u64::from);
        let constructed = r.exact_divide(&g).ok().flatten().is_none().then_some(e as u64);
        let ok = got.is_some() && got == by_div && (constructed.is_none() || constructed == got);
        t.record(ok, || format!("{text_f} / {text_g}: {got:?} vs {by_div:?}"));
    }
    (t.ok(), t.summary())
}

fn divisibility() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut t = Tally::new();
    let mut divisible = 0;
    for i in 0..300 {
        let n = 1 + i % 3;
        let a1 = rng.gen_range(1..=2);
        let a2 = rng.gen_range(1..=3);
        let g = random_poly(&mut rng, n, a1, a2);
        if g.is_constant() {
            continue;
        }
        let a1 = rng.gen_range(0..=3);
        let a2 = rng.gen_range(1..=4);
        let qt = random_poly(&mut rng, n, a1, a2);
        let mut f = &g * &qt;
        if i % 2 == 1 {
            // Perturb until the exact verdict flips.
            loop {
                let k = rng.gen_range(0..=2);
                let ms = monomials_of_degree(n, k);
                let mut p = f.clone();
                p.add_term(Monomial(ms[rng.gen_range(0..ms.len())].clone()), q(nonzero(&mut rng, 3)));
                if !p.is_zero() && p.exact_divide(&g).unwrap().is_none() {
                    f = p;
                    break;
                }
            }
        }
        let (tf, tg) = (render_poly(&f), render_poly(&g));
        let w = cli(&["divides", "--witness", &tf, &tg]);
        let x = cli(&["divides", &tf, &tg]);
        let (wv, xv) = (json(&w), json(&x));
        let exact = f.exact_divide(&g).unwrap();
        let mut ok = w.code == 0 && x.code == 0 && wv["divides"] == xv["divides"] && wv["divides"] == exact.is_some();
        if let Some(quot) = &exact {
            divisible += 1;
            let wq = wv["quotient"].as_str().and_then(|s| parse_poly_n(s, n).ok());
            ok &= wq.as_ref() == Some(quot);
        }
        t.record(ok, || format!("{tf} by {tg}: {} / {}", w.stdout.trim(), x.stdout.trim()));
    }
    (t.ok() && divisible >= 140, format!("{}; {divisible} divisible", t.summary()))
}

fn isolation() -> (bool, String) {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut schemes = Tally::new();
    for n in 1..=6 {
        for delta in 1..=2 {
            let monos = monomials_up_to(n, delta);
            let s = find_isolating_prime(n, delta, 1).unwrap();
            schemes.record(is_injective_pairwise(&monos, &s.w, s.p), || format!("weights n={n} delta={delta}"));
            let pr = IsolationScheme::for_projection(n, delta, &cfg).unwrap();
            let ok = is_injective_pairwise(&monos, &pr.w, pr.p) && is_injective_pairwise(&monos, &pr.w_prime, pr.p);
            schemes.record(ok, || format!("projection weights n={n} delta={delta}"));
        }
    }
    let mut homs = Tally::new();
    for i in 0..100 {
        let n = 1 + i % 5;
        let delta = 1 + (i / 5 % 2) as u32;
        let s = find_isolating_prime(n, delta, 1).unwrap();
        let a1 = rng.gen_range(0..=delta);
        let a2 = rng.gen_range(1..=6);
        let f = random_poly(&mut rng, n, a1, a2);
        let a1 = rng.gen_range(0..=delta);
        let a2 = rng.gen_range(1..=6);
        let g = random_poly(&mut rng, n, a1, a2);
        let pf = apply_phi(&f, &s).unwrap();
        let mult = apply_phi(&(&f * &g), &s).unwrap() == &pf * &apply_phi(&g, &s).unwrap();
        let back = recover_from_phi(&pf, &s, delta).ok() == Some(f.clone());
        homs.record(mult && back, || format!("{f} with {g}"));
    }
    let s = find_isolating_prime(2, 2, 1).unwrap();
    let xz = ["x", "z1", "z2"];
    let f = parse_poly_vars("x^2 - z1*z2", &xz).unwrap();
    let img = apply_phi(&f, &s).unwrap();
    let img_ok = img == parse_poly_vars("x^2 - y^4", &["x", "y"]).unwrap();
    let parts = factor_bivariate(&DensePoly3::from_sparse(&img).unwrap(), &cfg).unwrap();
    let xyt = ["x", "y", "t"];
    let want = normalized(&[
        (parse_poly_vars("x - y^2", &xyt).unwrap(), 1),
        (parse_poly_vars("x + y^2", &xyt).unwrap(), 1),
    ]);
    let worked = s.p == 7 && s.w == [1, 3] && img_ok && normalized(&parts.factors) == want;
    let ok = schemes.ok() && homs.ok() && worked;
    (ok, format!("injective schemes {}; hom and round trip {}; worked example {}", schemes.summary(), homs.summary(), worked))
}

/// Random polynomial in `(x, z_1..z_n)` monic in `x` with total degree `k`.
fn random_monic(rng: &mut ChaCha8Rng, n: usize, k: u32) -> SparsePoly {
    let mut g = SparsePoly::zero(n + 1);
    let mut top = vec![0u32; n + 1];
    top[0] = k;
    g.add_term(Monomial(top), Q::one());
    for _ in 0..rng.gen_range(1..=5) {
        let d = rng.gen_range(0..=k);
        let ms = monomials_of_degree(n + 1, d);
        let m = ms[rng.gen_range(0..ms.len())].clone();
        if m[0] < k {
            g.add_term(Monomial(m), q(nonzero(rng, 3)));
        }
    }
    g
}

fn psi_round_trip() -> (bool, String) {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut trip = Tally::new();
    for i in 0..100 {
        let n = 1 + i % 4;
        let delta = 1 + (i / 4 % 2) as u32;
        let s = IsolationScheme::for_projection(n, delta, &cfg).unwrap();
        let a1 = rng.gen_range(1..=delta);
        let g = random_monic(&mut rng, n, a1);
        let back = psi_map(&g, &s, &cfg).and_then(|h| psi_invert(&h, &s, delta, &cfg));
        trip.record(back.as_ref().ok() == Some(&g), || format!("{g}"));
    }
    let mut irr = Tally::new();
    let mut rejected = Tally::new();
    let mut made = 0;
    while made < 30 {
        let n = 1 + made % 4;
        let delta = 2;
        let g = random_monic(&mut rng, n, 2);
        if !quadratic_certified(&g) || g.var_support().len() < 2 {
            continue;
        }
        made += 1;
        let s = IsolationScheme::for_projection(n, delta, &cfg).unwrap();
        let h = psi_map(&g, &s, &cfg).unwrap();
        let fs = factor_monic(&h, &cfg).unwrap().1;
        irr.record(fs.len() == 1 && fs[0].1 == 1, || format!("{g}"));
        let [dx, dy, dt] = h.dims();
        let mut bad = h.clone();
        let (i, j, k) = (rng.gen_range(0..=dx), rng.gen_range(0..=dy), rng.gen_range(1..=dt.max(1)));
        if k > dt {
            continue;
        }
        bad.add_at(i, j, k, &q(nonzero(&mut rng, 5)));
        rejected.record(psi_invert(&bad, &s, delta, &cfg).is_err(), || format!("perturbed image of {g}"));
    }
    let ok = trip.ok() && irr.ok() && rejected.ok();
    (ok, format!("round trip {}; irreducible images {}; perturbed rejected {}", trip.summary(), irr.summary(), rejected.summary()))
}

fn random_univariate(rng: &mut ChaCha8Rng, d: u32) -> Vec<Q> {
    let mut c: Vec<Q> = (0..d).map(|_| q(rng.gen_range(-4..=4))).collect();
    c.push(q(nonzero(rng, 3)));
    c
}

/// Random factor in `nv` variables monic in the first (when `monic`) with `x`-degree `k`.
fn random_lowvar_factor(rng: &mut ChaCha8Rng, nv: usize, k: u32, monic: bool) -> SparsePoly {
    loop {
        let mut g = SparsePoly::zero(nv);
        let mut top = vec![0u32; nv];
        top[0] = k;
        if monic {
            g.add_term(Monomial(top), Q::one());
        } else {
            top[1] = rng.gen_range(0..=1);
            g.add_term(Monomial(top), q(nonzero(rng, 3)));
        }
        for _ in 0..rng.gen_range(1..=4) {
            let d = rng.gen_range(0..=k + 1);
            let ms = monomials_of_degree(nv, d);
            let m = ms[rng.gen_range(0..ms.len())].clone();
            if m[0] < k {
                g.add_term(Monomial(m), q(nonzero(rng, 3)));
            }
        }
        if g.var_support().len() == nv {
            return g;
        }
    }
}

fn base_factorizer(gate: &mut Gate) -> (bool, String) {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut recompose = Tally::new();
    let mut certified = Tally::new();
    let certify = |g: &SparsePoly, rng: &mut ChaCha8Rng, certified: &mut Tally| {
        if g.degree() <= 4 {
            let ok = certify_irreducible(g, rng);
            certified.record(ok, || format!("{g}"));
        }
    };
    for _ in 0..500 {
        let mut fp = SparsePoly::one(1);
        for _ in 0..rng.gen_range(1..=3) {
            let a1 = rng.gen_range(1..=4);
            let c = random_univariate(&mut rng, a1);
            let e = rng.gen_range(1..=2);
            let p = SparsePoly::from_univariate(1, 0, &c).pow(e);
            fp = &fp * &p;
        }
        let l = factor_univariate_q(&fp.to_univariate(0).unwrap()).unwrap();
        gate.check_all(&fp, &l.factors);
        recompose.record(l.expand(1).ok() == Some(fp.clone()), || format!("{fp}"));
        for (g, _) in &l.factors {
            certify(g, &mut rng, &mut certified);
        }
    }
    for (nv, count) in [(2usize, 200usize), (3, 100)] {
        for i in 0..count {
            let monic = i % 2 == 0;
            let mut f = SparsePoly::one(nv);
            for _ in 0..rng.gen_range(1..=3) {
                let a1 = rng.gen_range(1..=3);
                let g = random_lowvar_factor(&mut rng, nv, a1, monic);
                f = &f * &g.pow(rng.gen_range(1..=2));
            }
            let map: Vec<usize> = (0..nv).collect();
            let f3 = f.embed(3, &[0, 1, 2][..nv]);
            let l = if monic {
                let d = DensePoly3::from_sparse(&f).unwrap();
                if nv == 2 { factor_bivariate(&d, &cfg) } else { factor_trivariate(&d, &cfg) }
            } else {
                factor_lowvar(&f, &cfg).map(|l| {
                    let fs: Vec<(SparsePoly, u32)> = l.factors.iter().map(|(g, e)| (g.embed(3, &map), *e)).collect();
                    sparsefac::FactorList::from_factors(l.scalar.clone(), fs)
                })
            };
            let Ok(l) = l else {
                recompose.record(false, || format!("{f}: factorizer error"));
                continue;
            };
            gate.check_all(&f3, &l.factors);
            recompose.record(l.expand(3).ok() == Some(f3.clone()), || format!("{f}"));
            for (g, _) in &l.factors {
                certify(g, &mut rng, &mut certified);
            }
        }
    }
    let ok = recompose.ok() && certified.ok();
    (ok, format!("recomposition {}; factor certificates {}", recompose.summary(), certified.summary()))
}

fn sparse_interpolation() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut t = Tally::new();
    for i in 0..100 {
        let s = 1 + i % 16;
        let n = 1 + i % 4;
        let d = rng.gen_range(1..=6);
        let mut f = random_poly(&mut rng, n, d, s);
        if i % 3 == 0 {
            f = f.scale(&Q::new(1.into(), 2.into()));
        }
        let plan = interpolation_plan(s, n, d);
        let size_ok = plan.points.len() == 2 * s;
        let back = sparse_interpolate(&plan.evaluate(&f), s, n, d);
        t.record(size_ok && back.as_ref().ok() == Some(&f), || format!("s={s}: {f}"));
    }
    (t.ok(), t.summary())
}

/// Random irreducible sum of univariates with per-variable degree at most 2.
fn random_su_irreducible(rng: &mut ChaCha8Rng, n: usize) -> SparsePoly {
    loop {
        let k = rng.gen_range(1..=n.min(3));
        let vars = pick_distinct(rng, n, k);
        let mut g = SparsePoly::constant(n, q(rng.gen_range(-3..=3)));
        for &v in &vars {
            let d = rng.gen_range(1..=2);
            g = &g + &univariate_in(rng, n, v, d);
        }
        let ok = g.degree() == 1 || g.var_support().len() >= 3 || quadratic_certified(&g);
        if ok {
            return g.canonical().1;
        }
    }
}

fn su_pipeline(gate: &mut Gate) -> (bool, String) {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut theorem = Tally::new();
    for _ in 0..50 {
        let mut f = SparsePoly::constant(3, q(rng.gen_range(-5..=5)));
        for v in 0..3 {
            let a1 = rng.gen_range(1..=4);
            f = &f + &univariate_in(&mut rng, 3, v, a1);
        }
        let l = factor_lowvar(&f, &cfg).unwrap();
        theorem.record(l.factors.len() == 1 && l.factors[0].1 == 1, || format!("{f}"));
    }

    let oracle = su_oracle(4, 1, GridMode::Exhaustive { cap: cfg.su_oracle_cap }).unwrap();
    let mut contract = Tally::new();
    let size_ok = oracle.total_size() == Some(6 * 81 + 4 * 729);
    for code in 0..(4u32.pow(4) * 3) {
        let mut f = SparsePoly::constant(4, q((code / 256) as i64 - 1));
        for v in 0..4 {
            let c = (code / 4u32.pow(v as u32)) % 4;
            f.add_term(Monomial::var(4, v), q(c as i64 - 1));
        }
        if f.is_constant() {
            continue;
        }
        let alpha = monic_point(&f).unwrap().alpha;
        let found = oracle.pairs(&alpha).unwrap().any(|pair| {
            project(&f, &alpha, &pair.beta, None, &pair.gamma).map(|h| h.trimmed().degrees()[0] == 1).unwrap_or(false)
        });
        contract.record(found, || format!("{f}"));
    }

    let mut products = Tally::new();
    for i in 0..50 {
        let n = 2 + i % 3;
        let mut gs: Vec<(SparsePoly, u32)> = Vec::new();
        let count = rng.gen_range(1..=2);
        while gs.len() < count {
            let g = random_su_irreducible(&mut rng, n);
            if !gs.iter().any(|(h, _)| *h == g) {
                gs.push((g, rng.gen_range(1..=2)));
            }
        }
        let mut f = product(n, &gs);
        if i % 2 == 1 {
            // Non-sum-of-univariates cofactor z_a z_b + c z_a + c0, irreducible since c0 != 0.
            let ab = pick_distinct(&mut rng, n, 2);
            let mut h = SparsePoly::constant(n, q(nonzero(&mut rng, 3)));
            let mut e = vec![0u32; n];
            e[ab[0]] = 1;
            e[ab[1]] = 1;
            h.add_term(Monomial(e), Q::one());
            h.add_term(Monomial::var(n, ab[0]), q(rng.gen_range(-2..=2)));
            f = &f * &h;
        }
        let text = render_poly(&f);
        let out = cli(&["factor-su", "--degree", "2", &text]);
        let got = read_list(&out, n);
        if let Some((_, fs)) = &got {
            gate.check_all(&f, fs);
        }
        let ok = got.as_ref().map(|(_, fs)| normalized(fs) == normalized(&gs)).unwrap_or(false);
        products.record(ok, || format!("{text}: {} {}", out.stdout.trim(), out.stderr.trim()));
    }
    let ok = theorem.ok() && size_ok && contract.ok() && products.ok();
    (
        ok,
        format!(
            "three-variable irreducibility {}; d=1 n=4 contract {} (grid size ok: {size_ok}); products {}",
            theorem.summary(),
            contract.summary(),
            products.summary()
        ),
    )
}

fn sparse_vs_constant_degree(gate: &mut Gate) -> (bool, String) {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut t = Tally::new();
    for i in 0..50 {
        let n = 2 + i % 3;
        let a1 = rng.gen_range(1..=2);
        let gs = low_factors(&mut rng, n, a1, 2);
        let mut f = product(n, &gs);
        if i % 2 == 1 {
            f = &f * &random_cubic_irreducible(&mut rng, n);
        }
        let s = gs.iter().map(|(g, _)| g.num_terms()).max().unwrap();
        let oracle = constant_degree_oracle(2, n, &cfg).unwrap();
        let a = sparse_factors(&f, s, &oracle, &cfg);
        let b = constant_degree_factors(&f, 2, DivBackend::Exact, &cfg);
        if let Ok(a) = &a {
            gate.check_all(&f, &a.list.factors);
            gate.check_all(&f, &a.others);
        }
        let ok = match (&a, &b) {
            (Ok(a), Ok(b)) => a.list == *b && normalized(&b.factors) == normalized(&gs),
            _ => false,
        };
        t.record(ok, || format!("{f}"));
    }
    (t.ok(), t.summary())
}

fn main() {
    let mut gate = Gate::default();
    let started = Instant::now();
    let mut results: Vec<(usize, &str, bool, String)> = Vec::new();
    let mut step = |k: usize, name: &'static str, r: (bool, String)| {
        let line = format!("{} {k:>2} {name}: {}", if r.0 { "PASS" } else { "FAIL" }, r.1);
        println!("{line}  [{:.1}s]", started.elapsed().as_secs_f64());
        results.push((k, name, r.0, r.1));
    };
    step(1, "constant-degree completeness", constant_degree_completeness(&mut gate));
    step(2, "promise path", promise_path(&mut gate));
    step(3, "multiplicity", multiplicity());
    step(4, "divisibility witness", divisibility());
    step(5, "isolation", isolation());
    step(6, "projection round trip", psi_round_trip());
    step(7, "base factorizer", base_factorizer(&mut gate));
    step(8, "sparse interpolation", sparse_interpolation());
    step(9, "sum-of-univariates pipeline", su_pipeline(&mut gate));
    step(10, "sparse factors vs constant-degree", sparse_vs_constant_degree(&mut gate));
    let sound = gate.violations.is_empty() && gate.checked > 0;
    let detail = match gate.violations.first() {
        Some(v) => format!("{} violations in {} emitted factors; first: {v}", gate.violations.len(), gate.checked),
        None => format!("0 violations in {} emitted factors", gate.checked),
    };
    step(11, "soundness gate", (sound, detail));
    let failed = results.iter().filter(|r| !r.2).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
