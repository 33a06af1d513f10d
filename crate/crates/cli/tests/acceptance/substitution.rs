//! Hereditary substitution against the reference normalizer, and the
//! commutation law.

use colfw_core::subst::{simple_type_check, subst_canonical};
use colfw_core::syntax::{truncate_to, Name, SimpleType, Term};
use colfw_core::unfold::eq_at_depth;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lambda::{free_context, random_type, reference_subst, simple_context, Gen};

const MAX_SIZE: usize = 12;
const MAX_HEIGHT: usize = 3;
const DEPTHS: [usize; 6] = [1, 2, 3, 4, 6, 40];

/// Generate until the size bound holds.
fn term(rng: &mut ChaCha8Rng, ctx: &[(Name, SimpleType)], t: &SimpleType) -> Term {
    loop {
        let budget = rng.gen_range(1..6);
        let mut c = ctx.to_vec();
        let m = Gen::new(rng, budget).canonical(&mut c, t);
        if m.size() <= MAX_SIZE {
            return m;
        }
    }
}

fn with(ctx: &[(Name, SimpleType)], x: &Name, t: &SimpleType) -> Vec<(Name, SimpleType)> {
    let mut c = ctx.to_vec();
    c.push((x.clone(), t.clone()));
    c
}

fn well_typed(ctx: &[(Name, SimpleType)], m: &Term, t: &SimpleType) -> bool {
    simple_type_check(&simple_context(ctx), m, t, 64)
}

pub struct OracleStats {
    pub well_typed: usize,
    pub agreed: usize,
    pub ill_typed: usize,
    pub undefined: usize,
}

pub fn oracle(cases: usize, seed: u64) -> Result<OracleStats, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Name::new("x");
    let g0 = free_context();
    let mut st = OracleStats { well_typed: 0, agreed: 0, ill_typed: 0, undefined: 0 };
    while st.well_typed < cases {
        let tau = random_type(&mut rng, MAX_HEIGHT);
        let sigma = random_type(&mut rng, 2);
        let n = term(&mut rng, &g0, &tau);
        let m = term(&mut rng, &with(&g0, &x, &tau), &sigma);
        if !crate::lambda::contains_var(&m, &x) && rng.gen_bool(0.7) {
            continue;
        }
        st.well_typed += 1;
        let Some(expect) = reference_subst(&n, &x, &m) else {
            return Err(format!("reference normalizer diverged on well-typed input N={:?} M={:?}", n, m));
        };
        for k in DEPTHS {
            match subst_canonical(&n, &x, &tau, &m, k) {
                Ok(r) if eq_at_depth(&r, &truncate_to(&expect, k), k) => {}
                Ok(r) => {
                    return Err(format!("k={} [{:?}/x:{}] {:?} gave {:?}, expected {:?}", k, n, tau, m, r, expect))
                }
                Err(e) => return Err(format!("k={} undefined on well-typed input: {} ({:?}, {:?})", k, e, n, m)),
            }
        }
        st.agreed += 1;

        // The same shapes with x used at a different type than declared.
        let tau2 = random_type(&mut rng, MAX_HEIGHT);
        if tau2 == tau {
            continue;
        }
        let m2 = term(&mut rng, &with(&g0, &x, &tau2), &sigma);
        if !crate::lambda::contains_var(&m2, &x) {
            continue;
        }
        st.ill_typed += 1;
        for k in DEPTHS {
            if subst_canonical(&n, &x, &tau, &m2, k).is_err() {
                st.undefined += 1;
                let mismatch = !well_typed(&g0, &n, &tau) || !well_typed(&with(&g0, &x, &tau), &m2, &sigma);
                if !mismatch && reference_subst(&n, &x, &m2).is_some() {
                    return Err(format!("undefined at k={} without a type mismatch: {:?} {:?}", k, n, m2));
                }
            }
        }
    }
    Ok(st)
}

/// `[N/x]([P/y]M) = [[N/x]P/y]([N/x]M)` with `y` not free in `N`.
pub fn commutation(cases: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (x, y) = (Name::new("x"), Name::new("y"));
    let g0 = free_context();
    let mut done = 0;
    while done < cases {
        let t1 = random_type(&mut rng, MAX_HEIGHT);
        let t2 = random_type(&mut rng, MAX_HEIGHT);
        let sigma = random_type(&mut rng, 2);
        let n = term(&mut rng, &g0, &t1);
        let gx = with(&g0, &x, &t1);
        let p = term(&mut rng, &gx, &t2);
        let m = term(&mut rng, &with(&gx, &y, &t2), &sigma);
        let k = rng.gen_range(0..=6);
        let lhs = subst_canonical(&p, &y, &t2, &m, k).and_then(|pm| subst_canonical(&n, &x, &t1, &pm, k));
        let rhs = subst_canonical(&n, &x, &t1, &p, k).and_then(|np| {
            let nm = subst_canonical(&n, &x, &t1, &m, k)?;
            subst_canonical(&np, &y, &t2, &nm, k)
        });
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if eq_at_depth(&l, &r, k) => done += 1,
            (l, r) => return Err(format!("k={} N={:?} P={:?} M={:?}: {:?} vs {:?}", k, n, p, m, l, r)),
        }
    }
    Ok(done)
}
