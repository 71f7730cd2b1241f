use std::collections::HashMap;
use std::hash::Hash;

use super::{alphabet_size, decode_column, Dfa, Nfa, TrackSymbol};
use crate::error::{Error, Result};

/// Builds an NFA by exploring an implicit state space.
///
/// `step` receives a state and a column and pushes every successor into the
/// output vector; pushing nothing kills the run. Only reachable states are
/// materialized. Fails if more than `budget` states appear.
pub fn explore<S, F, A>(arity: usize, starts: Vec<S>, mut step: F, accept: A, budget: usize) -> Result<Nfa>
where
    S: Clone + Eq + Hash,
    F: FnMut(&S, &[TrackSymbol], &mut Vec<S>),
    A: Fn(&S) -> bool,
{
    let alpha = alphabet_size(arity);
    let columns: Vec<Vec<TrackSymbol>> = (0..alpha).map(|l| decode_column(l, arity)).collect();
    let mut ids: HashMap<S, u32> = HashMap::new();
    let mut states: Vec<S> = Vec::new();
    let intern = |s: S, states: &mut Vec<S>, ids: &mut HashMap<S, u32>| -> Result<u32> {
        if let Some(&id) = ids.get(&s) {
            return Ok(id);
        }
        if states.len() >= budget {
            return Err(Error::BudgetExceeded { limit: budget });
        }
        let id = states.len() as u32;
        ids.insert(s.clone(), id);
        states.push(s);
        Ok(id)
    };
    let mut initial = Vec::new();
    for s in starts {
        initial.push(intern(s, &mut states, &mut ids)?);
    }
    let mut start: Vec<u32> = vec![0];
    let mut targets: Vec<u32> = Vec::new();
    let mut out: Vec<S> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let cur = states[i].clone();
        for col in &columns {
            out.clear();
            step(&cur, col, &mut out);
            let from = targets.len();
            for s in out.drain(..) {
                targets.push(intern(s, &mut states, &mut ids)?);
            }
            targets[from..].sort_unstable();
            let mut kept = from;
            for r in from..targets.len() {
                if kept == from || targets[kept - 1] != targets[r] {
                    targets[kept] = targets[r];
                    kept += 1;
                }
            }
            targets.truncate(kept);
            start.push(targets.len() as u32);
        }
        i += 1;
    }
    let accepting = states.iter().map(&accept).collect();
    drop(ids);
    Nfa::from_csr(arity, start, targets, initial, accepting)
}

/// Deterministic variant of [`explore`]: `step` returns the unique
/// successor or `None` for the dead state.
pub fn explore_dfa<S, F, A>(arity: usize, start: S, mut step: F, accept: A, budget: usize) -> Result<Dfa>
where
    S: Clone + Eq + Hash,
    F: FnMut(&S, &[TrackSymbol]) -> Option<S>,
    A: Fn(&S) -> bool,
{
    let alpha = alphabet_size(arity);
    let columns: Vec<Vec<TrackSymbol>> = (0..alpha).map(|l| decode_column(l, arity)).collect();
    // State 0 is the dead sink.
    let mut ids: HashMap<S, u32> = HashMap::new();
    let mut states: Vec<Option<S>> = vec![None, Some(start.clone())];
    ids.insert(start, 1);
    let mut trans: Vec<u32> = vec![0; alpha];
    let mut i = 1;
    while i < states.len() {
        let cur = states[i].clone().expect("live state");
        for col in &columns {
            let t = match step(&cur, col) {
                None => 0,
                Some(s) => match ids.get(&s) {
                    Some(&id) => id,
                    None => {
                        if states.len() > budget {
                            return Err(Error::BudgetExceeded { limit: budget });
                        }
                        let id = states.len() as u32;
                        ids.insert(s.clone(), id);
                        states.push(Some(s));
                        id
                    }
                },
            };
            trans.push(t);
        }
        i += 1;
    }
    let accepting = states.iter().map(|s| s.as_ref().is_some_and(&accept)).collect();
    Dfa::new(arity, trans, 1, accepting)
}
