//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if
//! any criterion fails.

mod lambda;
mod machine;
mod signatures;
mod substitution;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use colfw_core::driver::{check_source, load, Options};
use colfw_core::subst::erase;
use colfw_core::syntax::{truncate, DeclBody, Name, Term, Type};
use colfw_core::unfold::{eq_at_depth, DefTable, Expander};

type Outcome = Result<String, String>;

fn dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(sub)
}

fn corpus() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir("corpus"))
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().map_or(false, |x| x == "colf"))
        .collect();
    v.sort();
    v
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {}", p.display(), e))
}

fn colfw(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_colfw")).args(args).env("COLFW_COLOR", "never").output().expect("spawn colfw")
}

fn codes(path: &Path, depth: usize) -> (Option<i32>, Vec<String>) {
    let o = colfw(&["check", path.to_str().unwrap(), "--json", "--depth", &depth.to_string()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("JSON diagnostics");
    let codes = v["items"].as_array().unwrap().iter().map(|i| i["code"].as_str().unwrap().to_string()).collect();
    (o.status.code(), codes)
}

fn corpus_acceptance() -> Outcome {
    let files = corpus();
    if files.len() != 9 {
        return Err(format!("expected 9 corpus signatures, found {}", files.len()));
    }
    let start = Instant::now();
    for f in &files {
        for k in [0, 1, 2, 4, 8] {
            let o = colfw(&["check", f.to_str().unwrap(), "--depth", &k.to_string()]);
            if o.status.code() != Some(0) || !o.stderr.is_empty() || !o.stdout.is_empty() {
                return Err(format!("{} at depth {}: {}", f.display(), k, String::from_utf8_lossy(&o.stderr)));
            }
        }
    }
    let t = start.elapsed();
    if t.as_secs_f64() >= 10.0 {
        return Err(format!("took {:.2?}", t));
    }
    Ok(format!("{} signatures x 5 depths clean in {:.2?}", files.len(), t))
}

const NEGATIVE: [(&str, &str); 5] = [
    ("noncontractive.colf", "E0201"),
    ("badnat.colf", "E0202"),
    ("underapplied.colf", "E0101"),
    ("arity.colf", "E0103"),
    ("neutral_pi.colf", "E0104"),
];

fn negative_suite() -> Outcome {
    for (f, want) in NEGATIVE {
        let (status, got) = codes(&dir("fixtures").join(f), 4);
        if status != Some(1) || got != [want] {
            return Err(format!("{}: exit {:?}, codes {:?}, expected [{}]", f, status, got, want));
        }
    }
    Ok(format!("{} fixtures, each exactly its expected code with exit 1", NEGATIVE.len()))
}

fn substitution_oracle() -> Outcome {
    let st = substitution::oracle(1200, 0x5eed_0003)?;
    Ok(format!(
        "{} well-typed cases agree at 6 depths; {} ill-typed cases, {} undefined results all explained",
        st.agreed, st.ill_typed, st.undefined
    ))
}

fn commutation() -> Outcome {
    let n = substitution::commutation(600, 0x5eed_0004)?;
    Ok(format!("{} triples at depths 0..=6, no counterexample", n))
}

fn coherence_and_monotonicity() -> Outcome {
    let mut pairs = 0;
    for f in corpus() {
        let (sig, diags) = load(&read(&f));
        if !diags.is_empty() {
            return Err(format!("{}: {:?}", f.display(), diags));
        }
        let mut ex = Expander::new(DefTable::from_signature(&sig));
        for d in sig.decls() {
            if !matches!(d.body, DeclBody::Def(..)) {
                continue;
            }
            for k in 0..=7 {
                let hi = ex.expand_def(&d.name, k + 1).map_err(|e| e.to_string())?;
                let lo = ex.expand_def(&d.name, k).map_err(|e| e.to_string())?;
                let cut = truncate(&hi, k + 1, k).map_err(|e| e.to_string())?;
                if !eq_at_depth(&cut, &lo, k) {
                    return Err(format!("{} `{}` at k={}: {:?} vs {:?}", f.display(), d.name, k, cut, lo));
                }
                pairs += 1;
            }
        }
    }

    let mut sources: Vec<(String, String)> = corpus().iter().map(|f| (f.display().to_string(), read(f))).collect();
    for e in std::fs::read_dir(dir("fixtures")).unwrap() {
        let p = e.unwrap().path();
        sources.push((p.display().to_string(), read(&p)));
    }
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0x5eed_0005);
    for i in 0..60 {
        sources.push((format!("generated #{}", i), signatures::random(&mut rng).source));
    }
    let mut checks = 0;
    for (name, src) in &sources {
        let clean: Vec<bool> = (0..=8)
            .map(|k| check_source(src, &Options { depth: k, ..Options::default() }).diagnostics.is_empty())
            .collect();
        for k in 0..8 {
            checks += 1;
            if clean[k + 1] && !clean[k] {
                return Err(format!("{} checks at depth {} but not at {}", name, k + 1, k));
            }
        }
    }
    Ok(format!("{} truncation pairs coherent; {} depth steps monotone over {} signatures", pairs, checks, sources.len()))
}

fn validity_oracle() -> Outcome {
    let mut agree = 0;
    for f in corpus() {
        agree += machine::compare(&f.display().to_string(), &read(&f))?;
    }
    for f in ["badnat.colf", "sigma6_z.colf"] {
        agree += machine::compare(f, &read(&dir("fixtures").join(f)))?;
    }
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0x5eed_0006);
    let mut invalid = 0;
    for i in 0..200 {
        let s = signatures::random(&mut rng);
        let (n, bad) = machine::compare_counting(&format!("generated #{}", i), &s.source)?;
        agree += n;
        invalid += bad;
    }
    Ok(format!("{} definitions agree with depth-12 traces ({} of the generated ones invalid)", agree, invalid))
}

fn spot_values() -> Outcome {
    let a = Type::pi("x", Type::atom("a", vec![]), Type::atom("a2", vec![Term::var("x")]));
    let e = erase(&a).to_string();
    if e != "* -> *" {
        return Err(format!("erase gave {}", e));
    }
    let cobin = dir("corpus").join("cobin.colf");
    let o = colfw(&["unfold", cobin.to_str().unwrap(), "w2", "--depth", "3"]);
    let shown = String::from_utf8_lossy(&o.stdout).trim().to_string();
    if shown != "b1 (b0 (b1 _))" {
        return Err(format!("unfold w2 printed {:?}", shown));
    }
    let (sig, _) = load(&read(&cobin));
    let mut ex = Expander::new(DefTable::from_signature(&sig));
    let eq = |ex: &mut Expander, k| {
        let w1 = ex.expand_def(&Name::new("w1"), k).unwrap();
        let w2 = ex.expand_def(&Name::new("w2"), k).unwrap();
        eq_at_depth(&w1, &w2, k)
    };
    if !eq(&mut ex, 1) || eq(&mut ex, 2) {
        return Err("w1 and w2 should agree at depth 1 only".into());
    }
    Ok("erase = * -> *; unfold w2 = b1 (b0 (b1 _)); w1 =1 w2, w1 /=2 w2".into())
}

fn sigma6() -> Outcome {
    let p = dir("corpus").join("sigma6.colf");
    let src = read(&p);
    for name in ["tmI", "tmY"] {
        if !src.lines().any(|l| l.starts_with(&format!("{} : ctm =", name))) {
            return Err(format!("{} missing from sigma6", name));
        }
    }
    let (status, got) = codes(&p, 6);
    if status != Some(0) || !got.is_empty() {
        return Err(format!("sigma6 at depth 6: exit {:?}, {:?}", status, got));
    }
    let (status, got) = codes(&dir("fixtures").join("sigma6_z.colf"), 6);
    if status != Some(1) || got != ["E0202"] {
        return Err(format!("Z: exit {:?}, {:?}", status, got));
    }
    Ok("I and Y check against ctm at depth 6; recursive Z rejected with E0202".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("corpus acceptance", corpus_acceptance),
        ("negative suite", negative_suite),
        ("hereditary substitution oracle", substitution_oracle),
        ("commutation", commutation),
        ("depth coherence and monotonicity", coherence_and_monotonicity),
        ("validity oracle", validity_oracle),
        ("spot values", spot_values),
        ("sigma6 terms", sigma6),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match r {
            Ok(detail) => println!("criterion {} {}: PASS ({})", i + 1, name, detail),
            Err(why) => {
                failed += 1;
                println!("criterion {} {}: FAIL ({})", i + 1, name, why)
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
