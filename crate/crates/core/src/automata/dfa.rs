use std::collections::{HashMap, VecDeque};
use std::rc::Rc;

use super::alphabet_size;
use crate::error::{Error, Result};

/// Total deterministic automaton over the padded column alphabet.
///
/// `trans[s * alpha + letter]` is the successor of `s`. Every state has a
/// transition on every letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    arity: usize,
    trans: Vec<u32>,
    initial: u32,
    accepting: Vec<bool>,
}

impl Dfa {
    pub fn new(arity: usize, trans: Vec<u32>, initial: u32, accepting: Vec<bool>) -> Result<Self> {
        let alpha = alphabet_size(arity);
        let n = accepting.len();
        if n == 0 || trans.len() != n * alpha {
            return Err(Error::param(format!(
                "transition table has {} entries, expected {}",
                trans.len(),
                n * alpha
            )));
        }
        if initial as usize >= n || trans.iter().any(|&t| t as usize >= n) {
            return Err(Error::param("state index out of range"));
        }
        Ok(Dfa {
            arity,
            trans,
            initial,
            accepting,
        })
    }

    /// One-state automaton accepting everything or nothing.
    pub fn trivial(arity: usize, accept: bool) -> Self {
        Dfa {
            arity,
            trans: vec![0; alphabet_size(arity)],
            initial: 0,
            accepting: vec![accept],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn alpha(&self) -> usize {
        alphabet_size(self.arity)
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn is_accepting(&self, s: u32) -> bool {
        self.accepting[s as usize]
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    #[inline]
    pub fn next(&self, s: u32, letter: usize) -> u32 {
        self.trans[s as usize * self.alpha() + letter]
    }

    pub fn run(&self, letters: &[usize]) -> u32 {
        letters.iter().fold(self.initial, |s, &l| self.next(s, l))
    }

    pub fn accepts_letters(&self, letters: &[usize]) -> bool {
        self.is_accepting(self.run(letters))
    }

    pub fn complement_raw(&self) -> Dfa {
        Dfa {
            accepting: self.accepting.iter().map(|a| !a).collect(),
            ..self.clone()
        }
    }

    /// Synchronous product over reachable state pairs.
    pub fn product(&self, other: &Dfa, combine: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        let alpha = self.alpha();
        let n2 = other.num_states();
        let dense = self.num_states().saturating_mul(n2) <= 1 << 24;
        let mut dense_ids: Vec<u32> = if dense {
            vec![u32::MAX; self.num_states() * n2]
        } else {
            Vec::new()
        };
        let mut sparse_ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        let mut trans: Vec<u32> = Vec::new();

        let mut intern = |p: (u32, u32), pairs: &mut Vec<(u32, u32)>| -> u32 {
            let next_id = pairs.len() as u32;
            let slot = if dense {
                let k = p.0 as usize * n2 + p.1 as usize;
                if dense_ids[k] == u32::MAX {
                    dense_ids[k] = next_id;
                }
                dense_ids[k]
            } else {
                *sparse_ids.entry(p).or_insert(next_id)
            };
            if slot == next_id {
                pairs.push(p);
            }
            slot
        };

        intern((self.initial, other.initial), &mut pairs);
        let mut i = 0;
        while i < pairs.len() {
            let (a, b) = pairs[i];
            for l in 0..alpha {
                let t = intern((self.next(a, l), other.next(b, l)), &mut pairs);
                trans.push(t);
            }
            i += 1;
        }
        let accepting = pairs
            .iter()
            .map(|&(a, b)| combine(self.is_accepting(a), other.is_accepting(b)))
            .collect();
        Ok(Dfa {
            arity: self.arity,
            trans,
            initial: 0,
            accepting,
        })
    }

    fn reachable_order(&self) -> Vec<u32> {
        let alpha = self.alpha();
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.initial];
        seen[self.initial as usize] = true;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for l in 0..alpha {
                let t = self.next(s, l);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// States from which some accepting state is reachable.
    pub fn coaccessible(&self) -> Vec<bool> {
        let n = self.num_states();
        let alpha = self.alpha();
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
        for s in 0..n {
            for l in 0..alpha {
                preds[self.trans[s * alpha + l] as usize].push(s as u32);
            }
        }
        let mut live = self.accepting.clone();
        let mut stack: Vec<u32> = (0..n as u32).filter(|&s| live[s as usize]).collect();
        while let Some(t) = stack.pop() {
            for &p in &preds[t as usize] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    pub fn is_empty(&self) -> bool {
        !self.reachable_order().iter().any(|&s| self.is_accepting(s))
    }

    /// True iff infinitely many words are accepted: a cycle through a
    /// state that is both reachable and co-reachable.
    pub fn is_infinite(&self) -> bool {
        let live = self.coaccessible();
        let useful: Vec<u32> = self
            .reachable_order()
            .into_iter()
            .filter(|&s| live[s as usize])
            .collect();
        let mut is_useful = vec![false; self.num_states()];
        for &s in &useful {
            is_useful[s as usize] = true;
        }
        // Iterative DFS cycle detection restricted to useful states.
        let alpha = self.alpha();
        let mut color = vec![0u8; self.num_states()];
        for &root in &useful {
            if color[root as usize] != 0 {
                continue;
            }
            let mut stack: Vec<(u32, usize)> = vec![(root, 0)];
            color[root as usize] = 1;
            while let Some(&mut (s, ref mut l)) = stack.last_mut() {
                if *l == alpha {
                    color[s as usize] = 2;
                    stack.pop();
                    continue;
                }
                let t = self.next(s, *l);
                *l += 1;
                if !is_useful[t as usize] {
                    continue;
                }
                match color[t as usize] {
                    0 => {
                        color[t as usize] = 1;
                        stack.push((t, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            }
        }
        false
    }

    /// Shortest accepted letter sequence, ties broken by letter index.
    pub fn shortest_accepted(&self) -> Option<Vec<usize>> {
        let alpha = self.alpha();
        let mut parent: Vec<Option<(u32, usize)>> = vec![None; self.num_states()];
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial as usize] = true;
        while let Some(s) = queue.pop_front() {
            if self.is_accepting(s) {
                let mut path = Vec::new();
                let mut cur = s;
                while let Some((p, l)) = parent[cur as usize] {
                    path.push(l);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for l in 0..alpha {
                let t = self.next(s, l);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    parent[t as usize] = Some((s, l));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Canonical minimal total DFA: unreachable states removed, Hopcroft
    /// refinement, then states renumbered in breadth-first letter order.
    /// Two automata with the same language minimize to equal values.
    pub fn minimize(&self) -> Dfa {
        let alpha = self.alpha();
        let order = self.reachable_order();
        let n = order.len();
        let mut compact = vec![u32::MAX; self.num_states()];
        for (i, &s) in order.iter().enumerate() {
            compact[s as usize] = i as u32;
        }
        let mut trans = vec![0u32; n * alpha];
        for (i, &s) in order.iter().enumerate() {
            for l in 0..alpha {
                trans[i * alpha + l] = compact[self.next(s, l) as usize];
            }
        }
        let accepting: Vec<bool> = order.iter().map(|&s| self.is_accepting(s)).collect();

        // Inverse transitions in CSR layout, indexed by (target, letter).
        let mut start = vec![0u32; n * alpha + 1];
        for s in 0..n {
            for l in 0..alpha {
                start[trans[s * alpha + l] as usize * alpha + l + 1] += 1;
            }
        }
        for i in 1..start.len() {
            start[i] += start[i - 1];
        }
        let mut fill = start.clone();
        let mut preds = vec![0u32; n * alpha];
        for s in 0..n {
            for l in 0..alpha {
                let k = trans[s * alpha + l] as usize * alpha + l;
                preds[fill[k] as usize] = s as u32;
                fill[k] += 1;
            }
        }

        let mut part = Partition::new(&accepting);
        let mut in_work = vec![true; part.num_blocks()];
        let mut work: Vec<usize> = (0..part.num_blocks()).collect();
        let mut touched: Vec<usize> = Vec::new();
        let mut splitter: Vec<u32> = Vec::new();
        while let Some(b) = work.pop() {
            in_work[b] = false;
            splitter.clear();
            splitter.extend_from_slice(part.elements(b));
            for l in 0..alpha {
                touched.clear();
                for &t in &splitter {
                    let k = t as usize * alpha + l;
                    for &p in &preds[start[k] as usize..start[k + 1] as usize] {
                        part.mark(p, &mut touched);
                    }
                }
                for &blk in &touched {
                    if let Some(nb) = part.split(blk) {
                        in_work.push(false);
                        if in_work[blk] || part.size(nb) <= part.size(blk) {
                            work.push(nb);
                            in_work[nb] = true;
                        } else {
                            work.push(blk);
                            in_work[blk] = true;
                        }
                    }
                }
            }
        }

        // Renumber blocks breadth-first from the initial block.
        let nb = part.num_blocks();
        let mut block_id = vec![u32::MAX; nb];
        let init_block = part.block_of(0);
        block_id[init_block] = 0;
        let mut queue = vec![init_block];
        let mut out_trans = Vec::with_capacity(nb * alpha);
        let mut i = 0;
        while i < queue.len() {
            let b = queue[i];
            let rep = part.elements(b)[0] as usize;
            for l in 0..alpha {
                let tb = part.block_of(trans[rep * alpha + l] as usize);
                if block_id[tb] == u32::MAX {
                    block_id[tb] = queue.len() as u32;
                    queue.push(tb);
                }
                out_trans.push(block_id[tb]);
            }
            i += 1;
        }
        let out_acc = queue
            .iter()
            .map(|&b| accepting[part.elements(b)[0] as usize])
            .collect();
        Dfa {
            arity: self.arity,
            trans: out_trans,
            initial: 0,
            accepting: out_acc,
        }
    }

    /// Applies a letter substitution: the new automaton reads letter `l`
    /// as the old letter `map(l)`. The new arity may differ.
    pub fn relabel(&self, new_arity: usize, map: impl Fn(usize) -> usize) -> Dfa {
        let new_alpha = alphabet_size(new_arity);
        let table: Vec<usize> = (0..new_alpha).map(map).collect();
        let mut trans = Vec::with_capacity(self.num_states() * new_alpha);
        for s in 0..self.num_states() as u32 {
            for &old in &table {
                trans.push(self.next(s, old));
            }
        }
        Dfa {
            arity: new_arity,
            trans,
            initial: self.initial,
            accepting: self.accepting.clone(),
        }
    }
}

/// Refinable partition of `0..n` with marking, used by Hopcroft's algorithm.
struct Partition {
    elems: Vec<u32>,
    pos: Vec<usize>,
    block: Vec<usize>,
    start: Vec<usize>,
    end: Vec<usize>,
    mid: Vec<usize>,
}

impl Partition {
    fn new(accepting: &[bool]) -> Self {
        let n = accepting.len();
        let mut elems: Vec<u32> = (0..n as u32).filter(|&s| !accepting[s as usize]).collect();
        let split = elems.len();
        elems.extend((0..n as u32).filter(|&s| accepting[s as usize]));
        let mut p = Partition {
            pos: vec![0; n],
            block: vec![0; n],
            elems,
            start: Vec::new(),
            end: Vec::new(),
            mid: Vec::new(),
        };
        for (range_start, range_end) in [(0, split), (split, n)] {
            if range_start < range_end {
                let b = p.start.len();
                p.start.push(range_start);
                p.end.push(range_end);
                p.mid.push(range_start);
                for i in range_start..range_end {
                    let s = p.elems[i] as usize;
                    p.block[s] = b;
                    p.pos[s] = i;
                }
            }
        }
        p
    }

    fn num_blocks(&self) -> usize {
        self.start.len()
    }

    fn elements(&self, b: usize) -> &[u32] {
        &self.elems[self.start[b]..self.end[b]]
    }

    fn size(&self, b: usize) -> usize {
        self.end[b] - self.start[b]
    }

    fn block_of(&self, s: usize) -> usize {
        self.block[s]
    }

    fn mark(&mut self, s: u32, touched: &mut Vec<usize>) {
        let b = self.block[s as usize];
        let p = self.pos[s as usize];
        let m = self.mid[b];
        if p < m {
            return;
        }
        let other = self.elems[m];
        self.elems.swap(p, m);
        self.pos[other as usize] = p;
        self.pos[s as usize] = m;
        if m == self.start[b] {
            touched.push(b);
        }
        self.mid[b] = m + 1;
    }

    /// Splits the marked prefix of `b` into a new block, unless every
    /// element is marked. Clears the marks.
    fn split(&mut self, b: usize) -> Option<usize> {
        let m = self.mid[b];
        if m == self.end[b] {
            self.mid[b] = self.start[b];
            return None;
        }
        let nb = self.start.len();
        self.start.push(self.start[b]);
        self.end.push(m);
        self.mid.push(self.start[b]);
        for i in self.start[b]..m {
            self.block[self.elems[i] as usize] = nb;
        }
        self.start[b] = m;
        self.mid[b] = m;
        Some(nb)
    }
}

/// Nondeterministic automaton with a set of initial states. Successors of
/// `(s, letter)` are `targets[start[k]..start[k + 1]]` with
/// `k = s * alpha + letter`.
#[derive(Debug, Clone)]
pub struct Nfa {
    arity: usize,
    start: Vec<u32>,
    targets: Vec<u32>,
    initial: Vec<u32>,
    accepting: Vec<bool>,
}

impl Nfa {
    pub fn new(arity: usize, trans: Vec<Vec<u32>>, initial: Vec<u32>, accepting: Vec<bool>) -> Result<Self> {
        let mut start = Vec::with_capacity(trans.len() + 1);
        let mut targets = Vec::new();
        start.push(0);
        for t in &trans {
            targets.extend_from_slice(t);
            start.push(targets.len() as u32);
        }
        Self::from_csr(arity, start, targets, initial, accepting)
    }

    pub(crate) fn from_csr(
        arity: usize,
        start: Vec<u32>,
        targets: Vec<u32>,
        initial: Vec<u32>,
        accepting: Vec<bool>,
    ) -> Result<Self> {
        let n = accepting.len();
        if start.len() != n * alphabet_size(arity) + 1 {
            return Err(Error::param("NFA transition table size mismatch"));
        }
        if targets.iter().chain(&initial).any(|&t| t as usize >= n) {
            return Err(Error::param("NFA transition to an unknown state"));
        }
        Ok(Nfa {
            arity,
            start,
            targets,
            initial,
            accepting,
        })
    }

    pub fn from_dfa(dfa: &Dfa) -> Nfa {
        Nfa {
            arity: dfa.arity,
            start: (0..=dfa.trans.len() as u32).collect(),
            targets: dfa.trans.clone(),
            initial: vec![dfa.initial],
            accepting: dfa.accepting.clone(),
        }
    }

    pub fn successors(&self, s: u32, letter: usize) -> &[u32] {
        let k = s as usize * alphabet_size(self.arity) + letter;
        &self.targets[self.start[k] as usize..self.start[k + 1] as usize]
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    /// Subset construction. Fails once more than `budget` subsets appear.
    pub fn determinize(&self, budget: usize) -> Result<Dfa> {
        let alpha = alphabet_size(self.arity);
        let mut ids: HashMap<Rc<[u32]>, u32> = HashMap::new();
        let mut subsets: Vec<Rc<[u32]>> = Vec::new();
        let mut init = self.initial.clone();
        init.sort_unstable();
        init.dedup();
        let init: Rc<[u32]> = init.into();
        ids.insert(init.clone(), 0);
        subsets.push(init);
        let mut trans: Vec<u32> = Vec::new();
        let mut scratch: Vec<u32> = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            for l in 0..alpha {
                scratch.clear();
                for &s in subsets[i].iter() {
                    scratch.extend_from_slice(self.successors(s, l));
                }
                scratch.sort_unstable();
                scratch.dedup();
                let id = match ids.get(scratch.as_slice()) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len() as u32;
                        if subsets.len() >= budget {
                            return Err(Error::BudgetExceeded { limit: budget });
                        }
                        let set: Rc<[u32]> = scratch.as_slice().into();
                        ids.insert(set.clone(), id);
                        subsets.push(set);
                        id
                    }
                };
                trans.push(id);
            }
            i += 1;
        }
        let accepting = subsets
            .iter()
            .map(|set| set.iter().any(|&s| self.accepting[s as usize]))
            .collect();
        Ok(Dfa {
            arity: self.arity,
            trans,
            initial: 0,
            accepting,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Unary-style language over arity 1: even number of symbols.
    fn even_length() -> Dfa {
        // states 0 (even), 1 (odd), plus the same behaviour on PAD letters
        Dfa::new(1, vec![1, 1, 1, 0, 0, 0], 0, vec![true, false]).unwrap()
    }

    #[test]
    fn minimize_is_idempotent() {
        let d = even_length();
        let m = d.minimize();
        assert_eq!(m.minimize(), m);
        assert_eq!(m.num_states(), 2);
    }

    #[test]
    fn minimize_merges_duplicate_states() {
        // 4-state machine where states 2,3 duplicate 0,1.
        let d = Dfa::new(1, vec![1, 1, 1, 2, 2, 2, 3, 3, 3, 0, 0, 0], 0, vec![true, false, true, false]).unwrap();
        assert_eq!(d.minimize(), even_length().minimize());
    }

    #[test]
    fn determinize_preserves_dfa_language() {
        let d = even_length();
        let back = Nfa::from_dfa(&d).determinize(usize::MAX).unwrap();
        assert_eq!(back.minimize(), d.minimize());
    }

    #[test]
    fn determinize_respects_budget() {
        let d = even_length();
        assert!(matches!(
            Nfa::from_dfa(&d).determinize(1),
            Err(Error::BudgetExceeded { limit: 1 })
        ));
    }

    #[test]
    fn emptiness_and_infiniteness() {
        assert!(Dfa::trivial(1, false).is_empty());
        assert!(!Dfa::trivial(1, true).is_empty());
        assert!(Dfa::trivial(1, true).is_infinite());
        assert!(even_length().is_infinite());
        // only ε accepted
        let eps = Dfa::new(1, vec![1, 1, 1, 1, 1, 1], 0, vec![true, false]).unwrap();
        assert!(!eps.is_infinite());
        assert_eq!(eps.shortest_accepted(), Some(vec![]));
    }
}
