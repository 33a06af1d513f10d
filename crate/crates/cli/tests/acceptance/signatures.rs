//! Small random first-order signatures with contractive definitions,
//! rendered as source text.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct Generated {
    pub source: String,
}

struct Ctor {
    args: Vec<usize>,
    target: usize,
}

struct Def {
    params: Vec<usize>,
    target: usize,
}

struct Env<'a> {
    ctors: &'a [Ctor],
    defs: &'a [Def],
    /// Index of the definition being generated; it may call itself.
    this: usize,
}

impl Env<'_> {
    fn term(&self, rng: &mut ChaCha8Rng, fam: usize, budget: i32) -> Option<String> {
        let params: Vec<usize> =
            self.defs[self.this].params.iter().enumerate().filter(|(_, f)| **f == fam).map(|(i, _)| i).collect();
        let ctors: Vec<usize> = (0..self.ctors.len())
            .filter(|&c| self.ctors[c].target == fam && (budget > 0 || self.ctors[c].args.is_empty()))
            .collect();
        let defs: Vec<usize> = (0..=self.this)
            .filter(|&d| self.defs[d].target == fam && (budget > 0 || self.defs[d].params.is_empty()))
            .collect();
        let mut choices = Vec::new();
        if !params.is_empty() {
            choices.push((0, 25));
        }
        if !ctors.is_empty() {
            choices.push((1, 35));
        }
        if !defs.is_empty() {
            choices.push((2, 40));
        }
        let &(which, _) = choices.choose_weighted(rng, |c| c.1).ok()?;
        match which {
            0 => Some(format!("x{}", params.choose(rng).unwrap())),
            1 => {
                let c = *ctors.choose(rng).unwrap();
                self.apply(rng, &format!("c{}", c), &self.ctors[c].args, budget)
            }
            _ => {
                let d = *defs.choose(rng).unwrap();
                self.apply(rng, &format!("r{}", d), &self.defs[d].params, budget)
            }
        }
    }

    fn apply(&self, rng: &mut ChaCha8Rng, head: &str, args: &[usize], budget: i32) -> Option<String> {
        let mut s = head.to_string();
        for &a in args {
            let t = self.term(rng, a, budget - 1)?;
            if t.contains(' ') {
                s.push_str(&format!(" ({})", t));
            } else {
                s.push(' ');
                s.push_str(&t);
            }
        }
        Some(s)
    }
}

fn arrow(args: &[usize], target: usize) -> String {
    let mut s = String::new();
    for a in args {
        s.push_str(&format!("t{} -> ", a));
    }
    s.push_str(&format!("t{}", target));
    s
}

/// At most 4 families, 6 constructors and 3 definitions. Every definition
/// body is headed by a constructor.
pub fn random(rng: &mut ChaCha8Rng) -> Generated {
    loop {
        if let Some(g) = attempt(rng) {
            return g;
        }
    }
}

fn attempt(rng: &mut ChaCha8Rng) -> Option<Generated> {
    let nf = rng.gen_range(1..=4);
    let nc = rng.gen_range(nf..=6);
    let nd = rng.gen_range(1..=3);
    let mut src = String::new();
    for f in 0..nf {
        let k = if rng.gen_bool(0.5) { "cotype" } else { "type" };
        src.push_str(&format!("t{} : {}.\n", f, k));
    }
    let ctors: Vec<Ctor> = (0..nc)
        .map(|c| Ctor {
            args: (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..nf)).collect(),
            target: if c < nf { c } else { rng.gen_range(0..nf) },
        })
        .collect();
    for (i, c) in ctors.iter().enumerate() {
        src.push_str(&format!("c{} : {}.\n", i, arrow(&c.args, c.target)));
    }
    let defs: Vec<Def> = (0..nd)
        .map(|_| Def {
            params: (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..nf)).collect(),
            target: rng.gen_range(0..nf),
        })
        .collect();
    for d in 0..nd {
        let env = Env { ctors: &ctors, defs: &defs, this: d };
        let target = defs[d].target;
        let heads: Vec<usize> = (0..nc).filter(|&c| ctors[c].target == target).collect();
        let c = *heads.choose(rng)?;
        let budget = rng.gen_range(1..=3);
        let body = env.apply(rng, &format!("c{}", c), &ctors[c].args, budget)?;
        let lams: String = (0..defs[d].params.len()).map(|i| format!("[x{}] ", i)).collect();
        src.push_str(&format!("r{} : {} = {}{}.\n", d, arrow(&defs[d].params, target), lams, body));
    }
    Some(Generated { source: src })
}
