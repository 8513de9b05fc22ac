//! Acceptance criteria, one line of output each. Runs without the libtest
//! harness so the summary is always printed; exits nonzero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ddkg_core::certifier::{build_simple0, check_finite1, certify, Simple1, Simple1Kind};
use ddkg_core::functor::{basis_out, eval_fp, image_presentation_check, is_in_c0, ses_check, support_region};
use ddkg_core::{
    Error, FpFunctor, Gamma, GentleTriple, Interval, Layer, MorphismKey, Region, Subfunctor, VertexId,
    Window,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const FINITE: [(i64, i64, i64); 3] = [(1, 2, 0), (2, 3, 0), (1, 3, 2)];
const INFINITE: [(i64, i64, i64); 3] = [(1, 1, 0), (2, 2, 0), (2, 2, 1)];

fn all_triples() -> impl Iterator<Item = (i64, i64, i64)> {
    FINITE.into_iter().chain(INFINITE)
}

fn model((r, n, m): (i64, i64, i64)) -> Gamma {
    Gamma::new(GentleTriple::new(r, n, m).unwrap())
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn theorem_values() -> Outcome {
    let mut notes = Vec::new();
    let window = Window::square(-8, 8);
    for (t, expected) in FINITE.iter().map(|t| (*t, 2)).chain(INFINITE.iter().map(|t| (*t, 1))) {
        let start = Instant::now();
        let cert = certify(model(t).triple(), &window, 8);
        let took = start.elapsed();
        if cert.kg != expected || !cert.passed() {
            let first = cert.failures().next().map(|c| c.detail.clone()).unwrap_or_default();
            return Err(format!("{t:?}: kg={} verdict={:?} {first}", cert.kg, cert.verdict));
        }
        if took >= Duration::from_secs(30) {
            return Err(format!("{t:?} took {took:.1?}"));
        }
        notes.push(format!("{t:?}->{} in {:.1}s", cert.kg, took.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn simple_objects() -> Outcome {
    let window = Window::square(-4, 4);
    let mut count = 0;
    for t in all_triples() {
        let g = model(t);
        let vertices = window.vertices(&g);
        for v in &vertices {
            let a = build_simple0(&g, v).map_err(|e| e.to_string())?;
            for u in &vertices {
                let dim = eval_fp(&g, &a, u);
                if dim != usize::from(u == v) {
                    return Err(format!("{t:?}: A at {v} has dimension {dim} at {u}"));
                }
            }
            count += 1;
        }
    }
    Ok(format!("{count} simple objects, zero failures"))
}

fn last(g: &Gamma, i: u32) -> i64 {
    i64::from(i + 1 == g.orbit_count())
}

fn c_prime(g: &Gamma, i: u32, a: i64, b: i64, aux: i64) -> FpFunctor {
    Simple1::new(Simple1Kind::CPrime, i, a, b, aux).build(g).unwrap()
}

fn c_double(g: &Gamma, i: u32, a: i64, b: i64, aux: i64) -> FpFunctor {
    Simple1::new(Simple1Kind::CDouble, i, a, b, aux).build(g).unwrap()
}

/// Checks the tower `0 -> K(top+e) -> K(top) -> A(top) -> 0` at one chain
/// index: exactness of the dimension count, and the sub-object's identity.
fn tower_step(g: &Gamma, s: &Simple1, skip: i64, w: &Window) -> Result<bool, Error> {
    let here = s.build(g)?;
    let (da, db) = s.kind.tower_step();
    let f = g.morphism_or_zero(&s.top(), &s.top().shifted(skip * da, skip * db), 0)?;
    let sub = Subfunctor::new(s.top(), vec![f])?;
    let exact = ses_check(g, &sub, &here.denominators, &build_simple0(g, &s.top())?, w)?;
    let layer = Layer {
        frame: here.denominators.clone(),
        upper: f,
        lower: Vec::new(),
        quotient: s.along_tower(skip).build(g)?,
    };
    Ok(exact && layer.holds(g, w)?)
}

fn exact_sequences() -> Outcome {
    let w = Window::square(-6, 6);
    let mut count = 0usize;
    let fail = |what: String| Err::<String, String>(what);
    for t in FINITE {
        let g = model(t);
        let (m, n) = (i64::from(g.triple().m()), i64::from(g.triple().n()));
        for v in w.vertices(&g) {
            let (i, a, b) = (v.orbit, v.a(), v.b());
            let dl = last(&g, i);
            let mut towers = Vec::new();
            match v.family {
                ddkg_core::Family::X => {
                    // finite1: C′ ↪ H/Im f → B′ ↠, presented through the degree-1 map to Z.
                    let sink = g.morphism_or_zero(&v, &v.shifted(1, 0), 0).unwrap();
                    let to_z = g.arrow(&v, &VertexId::z(i, a, 0), 1).unwrap();
                    let frame = Subfunctor::new(v, vec![sink]).unwrap();
                    let sub = c_prime(&g, i, a, 0, a + dl * m + 1);
                    let quot = Simple1::new(Simple1Kind::BPrime, i, a, b, 0).build(&g).unwrap();
                    let ok_sub = if sink.is_zero() {
                        image_presentation_check(&g, &to_z, &sub, &w).unwrap()
                    } else {
                        Layer { frame: frame.clone(), upper: to_z, lower: vec![], quotient: sub }
                            .holds(&g, &w)
                            .unwrap()
                    };
                    let ok_quot = Layer {
                        frame,
                        upper: MorphismKey::Identity(v),
                        lower: vec![to_z],
                        quotient: quot,
                    }
                    .holds(&g, &w)
                    .unwrap();
                    if !(ok_sub && ok_quot) {
                        return fail(format!("{t:?}: finite1 sequence at {v}"));
                    }
                    for aux in -6..=6 {
                        towers.push(Simple1::new(Simple1Kind::BPrime, i, a, b, aux));
                    }
                }
                ddkg_core::Family::Y => {
                    let sink = g.morphism_or_zero(&v, &v.shifted(1, 0), 0).unwrap();
                    let to_z = g.arrow(&v, &VertexId::z(i, 0, a), 1).unwrap();
                    let frame = Subfunctor::new(v, vec![sink]).unwrap();
                    let sub = c_double(&g, i, 0, a, a - dl * n + 1);
                    let quot = Simple1::new(Simple1Kind::BDouble, i, a, b, 0).build(&g).unwrap();
                    let ok_sub =
                        Layer { frame: frame.clone(), upper: to_z, lower: vec![], quotient: sub }
                            .holds(&g, &w)
                            .unwrap();
                    let ok_quot = Layer {
                        frame,
                        upper: MorphismKey::Identity(v),
                        lower: vec![to_z],
                        quotient: quot,
                    }
                    .holds(&g, &w)
                    .unwrap();
                    if !(ok_sub && ok_quot) {
                        return fail(format!("{t:?}: finite1 sequence at {v}"));
                    }
                    for aux in -6..=6 {
                        towers.push(Simple1::new(Simple1Kind::BDouble, i, a, b, aux));
                    }
                }
                ddkg_core::Family::Z => {
                    // nonsimple1: Im f(k+1) ↪ Im f(k) ↠ C′, chain indices 0..4.
                    for k in 0..=4 {
                        let upper = g.morphism_or_zero(&v, &v.shifted(k, 0), 0).unwrap();
                        let lower = g.morphism_or_zero(&v, &v.shifted(k + 1, 0), 0).unwrap();
                        let quotient = c_prime(&g, i, a + k, b, a + dl * m + 1);
                        let ok = if k == 0 {
                            let sub = Subfunctor::new(v, vec![lower]).unwrap();
                            ses_check(&g, &sub, &Subfunctor::zero(v), &quotient, &w).unwrap()
                        } else {
                            Layer { frame: Subfunctor::zero(v), upper, lower: vec![lower], quotient }
                                .holds(&g, &w)
                                .unwrap()
                        };
                        if !ok {
                            return fail(format!("{t:?}: nonsimple1 layer {k} at {v}"));
                        }
                        count += 1;
                    }
                    for aux in -6..=6 {
                        for kind in [Simple1Kind::CPrime, Simple1Kind::CDouble] {
                            let s = Simple1::new(kind, i, a, b, aux);
                            if s.aux <= s.aux_bound(&g).unwrap() {
                                towers.push(s);
                            }
                        }
                    }
                }
            }
            count += 2;
            for s in towers {
                for j in 0..=4 {
                    if !tower_step(&g, &s.along_tower(j), 1, &w).unwrap() {
                        return fail(format!("{t:?}: tower of {s} at index {j}"));
                    }
                    count += 1;
                }
            }
        }
    }

    // Perturbation controls, each of which must be rejected.
    let g = model((1, 2, 0));
    let z = VertexId::z(0, 0, 0);
    let to_z = g.arrow(&VertexId::x(0, 0, 0), &z, 1).unwrap();
    if image_presentation_check(&g, &to_z, &c_prime(&g, 0, 0, 0, 0), &w).unwrap() {
        return fail("auxiliary value perturbed by one was accepted".into());
    }
    let sub = Subfunctor::new(z, vec![g.arrow(&z, &z.shifted(1, 0), 0).unwrap()]).unwrap();
    if ses_check(&g, &sub, &Subfunctor::zero(z), &c_prime(&g, 0, 0, 0, -1), &w).unwrap() {
        return fail("wrong quotient coordinate was accepted".into());
    }
    let b = Simple1::new(Simple1Kind::BPrime, 0, 0, 1, 0);
    if tower_step(&g, &b, 2, &w).unwrap() {
        return fail("tower with a skipped index was accepted".into());
    }
    Ok(format!("{count} sequences exact, 3 perturbations rejected"))
}

fn composition_laws() -> Outcome {
    let w = Window::square(-3, 3);
    let mut triples = 0usize;
    for t in [(1, 2, 0), (1, 1, 0)] {
        let g = model(t);
        for u in w.vertices(&g) {
            let id_u = MorphismKey::Identity(u);
            let out = basis_out(&g, &u, &w);
            for f in &out {
                let v = f.target().unwrap();
                let id_v = MorphismKey::Identity(v);
                if g.compose(f, &id_u).unwrap() != *f || g.compose(&id_v, f).unwrap() != *f {
                    return Err(format!("{t:?}: identity is not neutral for {f}"));
                }
                if !g.compose(f, &MorphismKey::Zero).unwrap().is_zero()
                    || !g.compose(&MorphismKey::Zero, f).unwrap().is_zero()
                {
                    return Err(format!("{t:?}: zero does not absorb {f}"));
                }
                for h in basis_out(&g, &v, &w) {
                    let hf = g.compose(&h, f).unwrap();
                    if let Some(d) = hf.degree() {
                        if d != f.degree().unwrap() + h.degree().unwrap() {
                            return Err(format!("{t:?}: degree of {h} after {f}"));
                        }
                    }
                    let kh_all = basis_out(&g, &h.target().unwrap(), &w);
                    for k in &kh_all {
                        let left = g.compose(k, &hf).unwrap();
                        let right = g.compose(&g.compose(k, &h).unwrap(), f).unwrap();
                        if left != right {
                            return Err(format!("{t:?}: ({k} {h}) {f}: {left} vs {right}"));
                        }
                        triples += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{triples} composable triples, zero counterexamples"))
}

fn random_interval(rng: &mut StdRng) -> Interval {
    let mut bound = || rng.gen_bool(0.75).then(|| rng.gen_range(-12..=12));
    Interval { lo: bound(), hi: bound() }
}

fn random_region(rng: &mut StdRng) -> Region {
    Region {
        x: random_interval(rng),
        y: random_interval(rng),
        diff: if rng.gen_bool(0.6) { random_interval(rng) } else { Interval::FULL },
    }
}

fn brute_count(r: &Region, radius: i64) -> usize {
    let mut n = 0;
    for a in -radius..=radius {
        for b in -radius..=radius {
            n += usize::from(r.member((a, b).into()));
        }
    }
    n
}

fn region_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for trial in 0..10_000 {
        let (p, q) = (random_region(&mut rng), random_region(&mut rng));
        let meet = p.intersect(&q);
        let diff = p.subtract(&q);
        for a in -10..=10 {
            for b in -10..=10 {
                let pt = (a, b).into();
                let (in_p, in_q) = (p.member(pt), q.member(pt));
                let in_meet = meet.as_ref().is_some_and(|m| m.member(pt));
                if in_meet != (in_p && in_q) || diff.member(pt) != (in_p && !in_q) {
                    return Err(format!("trial {trial}: {p} vs {q} at ({a},{b})"));
                }
            }
        }
        // Bounds stay within ±12, so a finite region fits in [-24, 24]².
        let grows = brute_count(&p, 30) != brute_count(&p, 60);
        if p.is_finite() == grows {
            return Err(format!("trial {trial}: finiteness of {p}"));
        }
        if let Some(c) = p.close() {
            if c.close() != Some(c) {
                return Err(format!("trial {trial}: closure of {p} is not idempotent"));
            }
        }
    }
    Ok("10000 region pairs, zero disagreements".into())
}

fn support_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xfeed);
    let w = Window::square(-5, 5);
    let wide = Window::square(-7, 7);
    let mut checked = 0usize;
    for t in all_triples() {
        let g = model(t);
        let vertices = w.vertices(&g);
        for _ in 0..200 {
            let top = vertices[rng.gen_range(0..vertices.len())];
            let out = basis_out(&g, &top, &wide);
            let gens = (0..rng.gen_range(0..=3))
                .map(|_| {
                    if rng.gen_bool(0.1) {
                        MorphismKey::Zero
                    } else {
                        out[rng.gen_range(0..out.len())]
                    }
                })
                .collect();
            let f = FpFunctor::new(top, gens).unwrap();
            let support = support_region(&g, &f);
            for v in &vertices {
                if support.member(v) != (eval_fp(&g, &f, v) > 0) {
                    return Err(format!("{t:?}: {:?} at {v}", f.generators()));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("1200 functors, {checked} vertex checks, zero disagreements"))
}

fn c0_layers() -> Outcome {
    let w = Window::square(-4, 4);
    let mut count = 0;
    for t in all_triples() {
        let g = model(t);
        for v in w.vertices(&g) {
            if !is_in_c0(&g, &build_simple0(&g, &v).unwrap()) {
                return Err(format!("{t:?}: A at {v} is not of finite length"));
            }
            if is_in_c0(&g, &FpFunctor::representable(v)) {
                return Err(format!("{t:?}: H at {v} has finite support"));
            }
            if v.family == ddkg_core::Family::Z
                && !matches!(check_finite1(&g, &v, &w), Err(Error::WrongFamily { .. }))
            {
                return Err(format!("{t:?}: finite1 accepted {v}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} vertices"))
}

fn end_ring() -> Outcome {
    let g = model((1, 1, 0));
    let v = VertexId::x(0, 0, 0);
    let basis = g.hom_basis(&v, &v);
    if basis.len() != 2 {
        return Err(format!("End has basis {basis:?}"));
    }
    let eps = basis.iter().find(|h| !matches!(h, MorphismKey::Identity(_))).unwrap();
    let square = g.compose(eps, eps).unwrap();
    if !square.is_zero() {
        return Err(format!("{eps} squares to {square}"));
    }
    Ok(format!("End(X(0,0)) = span(id, {eps}), square zero"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("theorem values", theorem_values),
        ("simple-object suite", simple_objects),
        ("exact-sequence suite", exact_sequences),
        ("composition laws", composition_laws),
        ("region-algebra oracle", region_oracle),
        ("support oracle", support_oracle),
        ("finite-length layer facts", c0_layers),
        ("end ring of dual numbers", end_ring),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("PASS  {name} ({took:.1}s): {note}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name} ({took:.1}s): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
