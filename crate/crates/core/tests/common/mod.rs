#![allow(dead_code)]

use kcalc::{AlgExpr, Arity, CESet};
use rand::rngs::StdRng;
use rand::Rng;

const INDEX_NAMES: [&str; 3] = ["n", "m", "k"];

/// A random well-formed expression of depth at most `depth`. At most
/// `oplus_budget` nested `bigoplus` levels keep truncated sums small.
pub fn random_expr(rng: &mut StdRng, depth: u32, oplus_budget: u32) -> AlgExpr {
    gen(rng, depth, oplus_budget, None)
}

fn arity(rng: &mut StdRng, scope: Option<&str>) -> Arity {
    match scope {
        Some(index) if rng.gen_bool(0.6) => Arity::PrimeShift { index: index.to_string(), offset: rng.gen_range(0..4) },
        _ => Arity::Literal(rng.gen_range(2..12)),
    }
}

fn gen(rng: &mut StdRng, depth: u32, oplus_budget: u32, scope: Option<&str>) -> AlgExpr {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        return match rng.gen_range(0..4) {
            0 => AlgExpr::C,
            1 => AlgExpr::Zero,
            2 => AlgExpr::Cuntz(arity(rng, scope)),
            _ => AlgExpr::BS(arity(rng, scope)),
        };
    }
    let choice = rng.gen_range(0..if oplus_budget > 0 { 5 } else { 4 });
    match choice {
        0 => AlgExpr::susp(gen(rng, depth - 1, oplus_budget, scope)),
        1 => AlgExpr::unit(gen(rng, depth - 1, oplus_budget, scope)),
        2 | 3 => AlgExpr::sum(gen(rng, depth - 1, oplus_budget, scope), gen(rng, depth - 1, oplus_budget, scope)),
        _ => {
            let index = INDEX_NAMES[rng.gen_range(0..INDEX_NAMES.len())];
            AlgExpr::big_oplus(
                index,
                gen(rng, depth - 1, oplus_budget - 1, Some(index)),
                gen(rng, depth - 1, oplus_budget - 1, Some(index)),
            )
        }
    }
}

/// A random explicit set inside `[0, bound)` with entry stages up to `max_stage`.
pub fn random_set(rng: &mut StdRng, bound: u64, max_stage: u64) -> CESet {
    CESet::explicit((0..bound).filter_map(|n| rng.gen_bool(0.4).then(|| (n, rng.gen_range(0..=max_stage)))))
}
