//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod oracle;

use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use pkl_core::field::{Field, Fp, Rational};
use pkl_core::hecke::{pairing, Hecke, LaurentPoly};
use pkl_core::root_datum::RootDatum;
use pkl_core::soergel::hom::hom_graded_rank;
use pkl_core::soergel::pcan::PCanTable;
use pkl_core::soergel::{bott_samelson, bs_character, Realization};
use pkl_core::tilt::{self, Parabolic};
use pkl_core::weyl::{ExtWeylElt, WeylGroup};

use oracle::{bfs_lengths, reduced_words, KlOracle};

type Outcome = Result<String, String>;

fn group(name: &str) -> Arc<WeylGroup> {
    Arc::new(WeylGroup::from_name(name).unwrap())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Elements of the finite Weyl group (words in the finite simple reflections).
fn finite_elements(g: &WeylGroup) -> Vec<ExtWeylElt> {
    let fin: Vec<usize> = (0..g.n_fin).collect();
    g.finitary_data(&fin).unwrap().0
}

fn length_formula() -> Outcome {
    let mut checked = 0;
    for name in ["GL2", "A1-sc", "A2-sc"] {
        let g = group(name);
        for (x, d) in bfs_lengths(&g, 8) {
            ensure(g.length(&x) == d, || format!("{name}: {} has length {} but distance {d}", g.display(&x), g.length(&x)))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} elements"))
}

fn check_kl(g: &Arc<WeylGroup>, elts: &[ExtWeylElt], label: &str) -> Result<usize, String> {
    let h = Hecke::new(g.clone());
    let mut oracle = KlOracle::new(g.clone(), elts);
    for w in elts {
        let b = h.canonical_basis(w);
        ensure(h.bar(&b) == b, || format!("{label}: b_{} is not bar-invariant", g.display(w)))?;
        for (y, c) in &b {
            if y != w {
                ensure(c.in_v_zv() && c.has_nonnegative_coeffs(), || format!("{label}: h_{{{},{}}} = {c}", g.display(y), g.display(w)))?;
            }
        }
        ensure(b == oracle.canonical(w), || format!("{label}: b_{} differs from the classical recursion", g.display(w)))?;
    }
    Ok(elts.len())
}

fn kl_correctness() -> Outcome {
    let mut n = 0;
    let a2 = group("A2-sc");
    let a2_fin = finite_elements(&a2);
    n += check_kl(&a2, &a2_fin, "A2")?;
    let a3 = group("A3-sc");
    n += check_kl(&a3, &finite_elements(&a3), "A3")?;
    let gl2 = group("GL2");
    n += check_kl(&gl2, &gl2.enumerate_waff(6), "affine A1")?;
    n += check_kl(&a2, &a2.enumerate_waff(6), "affine A2")?;
    let w0 = a2_fin.iter().max_by_key(|x| a2.length(x)).unwrap();
    let h = Hecke::new(a2.clone()).kl_poly(&a2.identity(), w0);
    ensure(h == LaurentPoly::monomial(3, 1), || format!("h_{{e,w0}} = {h}"))?;
    Ok(format!("{n} elements, h_{{e,w0}} = {h}"))
}

fn soergel_char0() -> Outcome {
    let mut n = 0;
    for (name, finite) in [("GL2", false), ("A2-sc", true)] {
        let g = group(name);
        let elts: Vec<ExtWeylElt> = if finite { finite_elements(&g) } else { g.enumerate_waff(4) };
        let mut oracle = KlOracle::new(g.clone(), &elts);
        let mut t = PCanTable::<Rational>::new(g.clone()).map_err(|e| e.to_string())?;
        for w in &elts {
            let want = oracle.canonical(w);
            let got = t.p_canonical(w).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("{name}: ^0 b_{} differs from b_w", g.display(w)))?;
            let (_, word) = g.omega_factorize_word(w);
            let full = t.p_canonical_from_word(&word).map_err(|e| e.to_string())?;
            ensure(full == want, || format!("{name}: full decomposition of BS({}) disagrees", g.display(w)))?;
            n += 1;
        }
    }
    Ok(format!("{n} elements"))
}

fn words_up_to(n_simples: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max {
        layer = layer.iter().flat_map(|w: &Vec<usize>| (0..n_simples).map(move |s| [w.as_slice(), &[s]].concat())).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn hom_formula_for<F: Field>() -> Result<usize, String> {
    let g = group("GL2");
    let h = Hecke::new(g.clone());
    let r = Realization::<F>::new(&g).map_err(|e| e.to_string())?;
    let e = g.identity();
    let words = words_up_to(g.num_simples(), 3);
    let mut n = 0;
    for x in &words {
        for y in words.iter().filter(|y| x.len() + y.len() <= 3) {
            let m = bott_samelson(&r, &g, &e, x, 0);
            let k = bott_samelson(&r, &g, &e, y, 0);
            let got = hom_graded_rank(&m, &k).map_err(|e| e.to_string())?;
            let want = pairing(&bs_character(&h, &e, x, 0), &bs_character(&h, &e, y, 0));
            ensure(got == want, || format!("p={}: {x:?} vs {y:?}: {got} != {want}", F::characteristic()))?;
            n += 1;
        }
    }
    Ok(n)
}

fn hom_formula() -> Outcome {
    let a = hom_formula_for::<Rational>()?;
    let b = hom_formula_for::<Fp<2>>()?;
    Ok(format!("{} word pairs", a + b))
}

fn structural<F: Field>(name: &str, max_len: usize, words_len: usize) -> Result<usize, String> {
    let g = group(name);
    let mut t = PCanTable::<F>::new(g.clone()).map_err(|e| e.to_string())?;
    let h = Hecke::new(g.clone());
    let elts = g.enumerate_waff(max_len);
    let err = |e: pkl_core::soergel::SoergelError| e.to_string();
    for w in &elts {
        let pb = t.p_canonical(w).map_err(err)?;
        let shown = g.display(w);
        ensure(h.bar(&pb) == pb, || format!("{name}: ^p b_{shown} is not bar-invariant"))?;
        let wi = g.inv(w);
        for y in pb.keys() {
            let a = t.p_kl(y, w).map_err(err)?;
            let b = t.p_kl(&g.inv(y), &wi).map_err(err)?;
            ensure(a == b, || format!("{name}: inversion symmetry fails at ({}, {shown})", g.display(y)))?;
        }
        for (y, c) in h.in_canonical_basis(&pb) {
            ensure(c.has_nonnegative_coeffs(), || format!("{name}: coefficient {c} of b_{} in ^p b_{shown}", g.display(&y)))?;
        }
        if g.length(w) <= words_len {
            for word in reduced_words(&g, w) {
                let other = t.p_canonical_from_word(&word).map_err(err)?;
                ensure(other == pb, || format!("{name}: ^p b_{shown} depends on the reduced word {word:?}"))?;
            }
        }
    }
    Ok(elts.len())
}

fn pcan_structure() -> Outcome {
    let a = structural::<Fp<2>>("GL2", 6, 6)?;
    let b = structural::<Fp<3>>("GL2", 6, 6)?;
    let c = structural::<Fp<2>>("A2-adj", 4, 4)?;
    Ok(format!("{} elements (affine A1 at p=2,3; affine A2 at p=2, all reduced words up to length 4)", a + b + c))
}

fn hom_consistency_for<F: Field>() -> Result<usize, String> {
    let g = group("GL2");
    let mut t = PCanTable::<F>::new(g.clone()).map_err(|e| e.to_string())?;
    let elts = g.enumerate_waff(5);
    let mut n = 0;
    for w in &elts {
        for y in &elts {
            let a = tilt::parity_hom_dim(&mut t, w, y, None).map_err(|e| e.to_string())?;
            let b = tilt::tilt_hom_dim(&mut t, &g.inv(w), &g.inv(y), None).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("p={}: ({}, {}): {a} != {b}", F::characteristic(), g.display(w), g.display(y)))?;
            n += 1;
        }
    }
    Ok(n)
}

fn mult_consistency() -> Outcome {
    let n = hom_consistency_for::<Rational>()? + hom_consistency_for::<Fp<2>>()?;
    Ok(format!("{n} pairs"))
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect()).collect()
}

fn parabolic_for<F: Field>(name: &str, max_len: usize) -> Result<usize, String> {
    let g = group(name);
    let mut t = PCanTable::<F>::new(g.clone()).map_err(|e| e.to_string())?;
    let err = |e: tilt::TiltError| e.to_string();
    let finitary: Vec<Vec<usize>> = subsets(g.num_simples()).into_iter().filter(|s| g.is_finitary(s)).collect();
    let mut n = 0;
    for l in &finitary {
        for k in &finitary {
            let par = Parabolic::new(&t, l, k).map_err(err)?;
            let elts = tilt::table_elements(&t, &par, max_len).map_err(err)?;
            for w in &elts {
                for y in &elts {
                    let value = par.mult(&mut t, w, y).map_err(err)?;
                    let sweep = par.z_sweep(&mut t, w, y).map_err(err)?;
                    ensure(sweep.iter().all(|&v| v == value as i64), || {
                        format!("{name} L={l:?} K={k:?} ({}, {}): {sweep:?}", g.display(w), g.display(y))
                    })?;
                    if l.is_empty() && k.is_empty() {
                        let direct = tilt::tilt_mult(&mut t, w, y).map_err(err)?;
                        ensure(direct == value, || format!("{name}: empty L, K disagrees with tilt_mult"))?;
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

fn parabolic() -> Outcome {
    let a = parabolic_for::<Fp<2>>("GL2", 5)?;
    let b = parabolic_for::<Rational>("GL2", 5)?;
    let c = parabolic_for::<Fp<2>>("A2-adj", 5)?;
    Ok(format!("{} entries (affine A1 at p=0,2; affine A2 at p=2)", a + b + c))
}

fn assumption_gate() -> Outcome {
    let fig = |name: &str, p: u64| RootDatum::named(name).unwrap().check_assumptions(p).unwrap().figure1_ok;
    let primes = [2u64, 3, 5, 7, 11, 13];
    for n in 1..=5 {
        for &p in &primes {
            ensure(fig(&format!("A{n}-sc"), p), || format!("A{n} fails at p={p}"))?;
        }
    }
    ensure(!fig("B2-sc", 2), || "B2 passes at p=2".into())?;
    ensure(!fig("G2-sc", 2) && !fig("G2-sc", 3), || "G2 passes at p in {2,3}".into())?;
    ensure(fig("G2-sc", 5), || "G2 fails at p=5".into())?;
    Ok("A1..A5, B2, G2".into())
}

fn run_pkl(dir: &Path, args: &[&str]) -> (Option<i32>, Vec<u8>, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_pkl")).current_dir(dir).env_remove("PKL_CACHE_DIR").args(args).output().unwrap();
    (o.status.code(), o.stdout, String::from_utf8_lossy(&o.stderr).into_owned())
}

fn determinism() -> Outcome {
    let tmp = std::env::temp_dir().join(format!("pkl-acceptance-{}", std::process::id()));
    let (a, b) = (tmp.join("a"), tmp.join("b"));
    for d in [&a, &b] {
        std::fs::create_dir_all(d).map_err(|e| e.to_string())?;
    }
    let args = ["tilt", "--datum", "GL2", "--p", "2", "--max-len", "5", "--format", "json", "--cache", "cache.json"];
    let ra = run_pkl(&a, &args);
    let rb = run_pkl(&b, &args);
    ensure(ra.0 == Some(0) && rb.0 == Some(0), || format!("tilt failed: {}", ra.2))?;
    ensure(ra.1 == rb.1, || "tables differ between identical runs".into())?;
    let ca = std::fs::read(a.join("cache.json")).map_err(|e| e.to_string())?;
    let cb = std::fs::read(b.join("cache.json")).map_err(|e| e.to_string())?;
    ensure(ca == cb, || "cache files differ between identical runs".into())?;
    let again = run_pkl(&a, &args);
    ensure(again.1 == ra.1, || "a cached rerun changed the table".into())?;

    let verify = ["cache", "verify", "--datum", "GL2", "--p", "2", "--cache", "cache.json"];
    let v = run_pkl(&a, &verify);
    ensure(v.0 == Some(0), || format!("verify on a fresh cache: {}", v.2))?;

    let path = a.join("cache.json");
    let mut doc: serde_json::Value = serde_json::from_slice(&ca).map_err(|e| e.to_string())?;
    let key = doc["entries"][5]["key"].as_str().unwrap_or_default().to_string();
    doc["entries"][5]["pcan"][0][1] = serde_json::json!({"1": 3});
    std::fs::write(&path, serde_json::to_vec_pretty(&doc).unwrap()).map_err(|e| e.to_string())?;
    let v = run_pkl(&a, &verify);
    ensure(v.0 == Some(5) && v.2.contains(&key), || format!("tampered entry {key} not reported: {:?} {}", v.0, v.2))?;
    let _ = std::fs::remove_dir_all(&tmp);
    Ok(format!("{} table bytes, tampered entry {key} detected", ra.1.len()))
}

fn main() {
    let criteria: Vec<(&str, Duration, fn() -> Outcome)> = vec![
        ("length formula vs breadth-first search", Duration::from_secs(10), length_formula),
        ("Kazhdan-Lusztig basis", Duration::from_secs(60), kl_correctness),
        ("characteristic 0 bimodules give the KL basis", Duration::from_secs(600), soergel_char0),
        ("graded Hom dimensions vs pairing", Duration::from_secs(300), hom_formula),
        ("p-canonical structural properties", Duration::from_secs(1800), pcan_structure),
        ("parity vs tilting Hom dimensions", Duration::from_secs(300), mult_consistency),
        ("parabolic multiplicities", Duration::from_secs(600), parabolic),
        ("assumption gate", Duration::from_secs(1), assumption_gate),
        ("determinism and persistence", Duration::from_secs(60), determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let line = match outcome {
            Ok(detail) if took <= limit => format!("PASS {}: {name} [{:.2}s] {detail}", i + 1, took.as_secs_f64()),
            Ok(detail) => format!("FAIL {}: {name} [{:.2}s > {}s] {detail}", i + 1, took.as_secs_f64(), limit.as_secs()),
            Err(why) => format!("FAIL {}: {name} [{:.2}s] {why}", i + 1, took.as_secs_f64()),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("{line}");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
