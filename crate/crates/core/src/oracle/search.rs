//! Depth-first Hamiltonian-cycle search with degree and connectivity pruning.
//!
//! `cnt[w]` for an unvisited `w` counts its unvisited neighbours, plus one if
//! the current head is a neighbour, plus one if `w` may still close the
//! cycle. It never undercounts the neighbours `w` can use in the cycle, so
//! `cnt[w] < 2` proves a dead end.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use super::graph::{Graph, NONE};

pub(crate) struct Limits<'a> {
    pub node_limit: u64,
    pub deadline: Option<Instant>,
    pub cancel: Option<&'a AtomicBool>,
    pub shared_nodes: Option<&'a AtomicU64>,
}

pub(crate) enum RunEnd {
    Found(Vec<u32>),
    /// The subtree below the floor holds no cycle.
    Complete,
    Cutoff,
}

enum Step {
    Fail,
    Advance,
    Found,
}

#[derive(Clone, Copy)]
struct Frame {
    begin: u32,
    end: u32,
    cursor: u32,
}

pub(crate) struct Search<'g> {
    g: &'g Graph,
    visited: Vec<bool>,
    cnt: Vec<i32>,
    eligible: Vec<bool>,
    close_left: i32,
    path: Vec<u32>,
    start: u32,
    first_forced: u32,
    sym_break: bool,
    prio: &'g [u32],
    heuristic: bool,
    interval: usize,
    cands: Vec<u32>,
    frames: Vec<Frame>,
    stamp: Vec<u32>,
    generation: u32,
    queue: Vec<u32>,
    pub nodes: u64,
}

/// Vertex the search starts from: an endpoint of a required edge if any,
/// otherwise a real vertex of least degree.
pub(crate) fn choose_start(g: &Graph) -> u32 {
    let real = 0..g.cells as u32;
    if let Some(v) = g.start {
        return v;
    }
    if let Some(v) = real.clone().find(|&v| g.req_count(v) > 0) {
        return v;
    }
    real.min_by_key(|&v| (g.degree(v), v)).unwrap_or(0)
}

impl<'g> Search<'g> {
    pub fn new(g: &'g Graph, prio: &'g [u32], heuristic: bool, interval: usize) -> Self {
        let n = g.n;
        let start = choose_start(g);
        let mut eligible = vec![false; n];
        let mut first_forced = NONE;
        let reqs: Vec<u32> = g.req[start as usize].iter().copied().filter(|&p| p != NONE).collect();
        let sym_break = reqs.is_empty();
        match reqs.as_slice() {
            [] => {
                for &w in g.nbrs(start) {
                    eligible[w as usize] = true;
                }
            }
            [p] => eligible[*p as usize] = true,
            [p, q] => {
                // The virtual vertex, when present, is the better closer.
                let (first, closer) = if g.is_virtual(*p) { (*q, *p) } else { (*p, *q) };
                first_forced = first;
                eligible[closer as usize] = true;
            }
            _ => unreachable!("at most two required partners"),
        }
        let mut visited = vec![false; n];
        visited[start as usize] = true;
        let mut cnt = vec![0i32; n];
        for v in 0..n as u32 {
            if visited[v as usize] {
                continue;
            }
            let unvisited = g.nbrs(v).iter().filter(|&&w| !visited[w as usize]).count() as i32;
            let head = i32::from(g.nbrs(v).contains(&start));
            cnt[v as usize] = unvisited + head + i32::from(eligible[v as usize]);
        }
        let close_left = eligible.iter().filter(|&&e| e).count() as i32;
        Search {
            g,
            visited,
            cnt,
            eligible,
            close_left,
            path: vec![start],
            start,
            first_forced,
            sym_break,
            prio,
            heuristic,
            interval,
            cands: Vec::new(),
            frames: Vec::new(),
            stamp: vec![0; n],
            generation: 0,
            queue: Vec::new(),
            nodes: 0,
        }
    }

    fn apply(&mut self, h: u32, v: u32) {
        self.visited[v as usize] = true;
        self.path.push(v);
        self.nodes += 1;
        for &w in self.g.nbrs(h) {
            if !self.visited[w as usize] {
                self.cnt[w as usize] -= 1;
            }
        }
        if self.sym_break && self.path.len() == 2 {
            for &w in self.g.nbrs(self.start) {
                if !self.visited[w as usize] && w < v {
                    self.eligible[w as usize] = false;
                    self.cnt[w as usize] -= 1;
                    self.close_left -= 1;
                }
            }
        }
        if self.eligible[v as usize] {
            self.close_left -= 1;
        }
    }

    fn undo(&mut self, h: u32, v: u32) {
        if self.eligible[v as usize] {
            self.close_left += 1;
        }
        if self.sym_break && self.path.len() == 2 {
            for &w in self.g.nbrs(self.start) {
                if !self.visited[w as usize] && w < v {
                    self.eligible[w as usize] = true;
                    self.cnt[w as usize] += 1;
                    self.close_left += 1;
                }
            }
        }
        for &w in self.g.nbrs(h) {
            if !self.visited[w as usize] {
                self.cnt[w as usize] += 1;
            }
        }
        self.visited[v as usize] = false;
        self.path.pop();
    }

    /// Moves the head from `h` to `v` and runs the pruning checks; undoes the move on failure.
    fn step(&mut self, h: u32, v: u32) -> Step {
        self.apply(h, v);
        let ok = self.check(h, v);
        match ok {
            Step::Fail => self.undo(h, v),
            Step::Advance | Step::Found => {}
        }
        ok
    }

    fn check(&mut self, h: u32, v: u32) -> Step {
        let g = self.g;
        let rem = g.n - self.path.len();
        if rem == 0 {
            let closes = self.eligible[v as usize]
                && g.req[v as usize]
                    .iter()
                    .all(|&p| p == NONE || p == h || p == self.start);
            return if closes { Step::Found } else { Step::Fail };
        }
        if self.close_left == 0 {
            return Step::Fail;
        }
        let mut open_req = 0;
        for &p in &g.req[v as usize] {
            if p == NONE || p == h {
                continue;
            }
            if self.visited[p as usize] {
                return Step::Fail;
            }
            open_req += 1;
        }
        if open_req > 1 {
            return Step::Fail;
        }
        for &w in g.nbrs(h) {
            if !self.visited[w as usize] && self.cnt[w as usize] < 2 {
                return Step::Fail;
            }
        }
        if self.interval > 0 && rem > 2 && self.path.len() % self.interval == 0 && !self.connected(v, rem) {
            return Step::Fail;
        }
        Step::Advance
    }

    /// Whether every unvisited vertex is reachable from the head through unvisited vertices.
    fn connected(&mut self, head: u32, rem: usize) -> bool {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.fill(0);
            self.generation = 1;
        }
        let gen = self.generation;
        self.queue.clear();
        self.queue.push(head);
        let mut reached = 0;
        let mut i = 0;
        while i < self.queue.len() {
            let u = self.queue[i];
            i += 1;
            for &w in self.g.nbrs(u) {
                if !self.visited[w as usize] && self.stamp[w as usize] != gen {
                    self.stamp[w as usize] = gen;
                    reached += 1;
                    self.queue.push(w);
                }
            }
        }
        reached == rem
    }

    /// Pushes the candidate successors of head `h`; false when there are none.
    fn generate(&mut self, h: u32) -> bool {
        let g = self.g;
        let begin = self.cands.len();
        let mut forced = NONE;
        if self.path.len() == 1 {
            forced = self.first_forced;
        } else {
            let pred = self.path[self.path.len() - 2];
            for &p in &g.req[h as usize] {
                if p != NONE && p != pred && !self.visited[p as usize] {
                    forced = p;
                }
            }
            for &w in g.nbrs(h) {
                if !self.visited[w as usize] && self.cnt[w as usize] == 2 {
                    if forced == NONE {
                        forced = w;
                    } else if forced != w {
                        return false;
                    }
                }
            }
        }
        if forced != NONE {
            self.cands.push(forced);
            return true;
        }
        let rem = g.n - self.path.len();
        for &w in g.nbrs(h) {
            if self.visited[w as usize] {
                continue;
            }
            // Spending the last closer early can never succeed.
            if rem > 1 && self.eligible[w as usize] && self.close_left == 1 {
                continue;
            }
            self.cands.push(w);
        }
        let slice = &mut self.cands[begin..];
        if self.heuristic {
            let (cnt, prio) = (&self.cnt, self.prio);
            slice.sort_unstable_by_key(|&w| (cnt[w as usize], prio[w as usize]));
        } else {
            slice.sort_unstable();
        }
        self.cands.len() > begin
    }

    /// Replays a prefix produced by [`Search::collect`] on a fresh search.
    pub fn replay(&mut self, prefix: &[u32]) -> bool {
        debug_assert_eq!(prefix.first(), Some(&self.start));
        for w in prefix.windows(2) {
            if !matches!(self.step(w[0], w[1]), Step::Advance) {
                return false;
            }
        }
        true
    }

    /// All pruned search states with `depth` path vertices, or a cycle found on the way.
    pub fn collect(&mut self, depth: usize, out: &mut Vec<Vec<u32>>) -> Option<Vec<u32>> {
        if self.path.len() >= depth {
            out.push(self.path.clone());
            return None;
        }
        let h = *self.path.last().unwrap();
        let base = self.cands.len();
        if !self.generate(h) {
            self.cands.truncate(base);
            return None;
        }
        let list: Vec<u32> = self.cands[base..].to_vec();
        self.cands.truncate(base);
        for v in list {
            match self.step(h, v) {
                Step::Fail => {}
                Step::Found => return Some(self.path.clone()),
                Step::Advance => {
                    if let Some(found) = self.collect(depth, out) {
                        return Some(found);
                    }
                    self.undo(h, v);
                }
            }
        }
        None
    }

    /// Exhausts the subtree below the current path.
    pub fn run(&mut self, lim: &Limits<'_>) -> RunEnd {
        let floor = self.path.len();
        if self.g.n - floor == 0 {
            return RunEnd::Complete;
        }
        self.frames.clear();
        self.cands.clear();
        if !self.push_frame() {
            return RunEnd::Complete;
        }
        let mut last_flush = self.nodes;
        loop {
            if self.nodes - last_flush >= 1024 {
                let delta = self.nodes - last_flush;
                last_flush = self.nodes;
                if self.out_of_budget(lim, delta) {
                    return RunEnd::Cutoff;
                }
            }
            let top = self.frames.len() - 1;
            let frame = self.frames[top];
            if frame.cursor == frame.end {
                self.cands.truncate(frame.begin as usize);
                self.frames.pop();
                if self.frames.is_empty() {
                    return RunEnd::Complete;
                }
                let len = self.path.len();
                let (h, v) = (self.path[len - 2], self.path[len - 1]);
                self.undo(h, v);
                continue;
            }
            self.frames[top].cursor += 1;
            let v = self.cands[frame.cursor as usize];
            let h = *self.path.last().unwrap();
            match self.step(h, v) {
                Step::Fail => {}
                Step::Found => return RunEnd::Found(self.path.clone()),
                Step::Advance => {
                    if !self.push_frame() {
                        self.undo(h, v);
                    }
                }
            }
        }
    }

    fn push_frame(&mut self) -> bool {
        let h = *self.path.last().unwrap();
        let begin = self.cands.len();
        if self.generate(h) {
            self.frames.push(Frame {
                begin: begin as u32,
                end: self.cands.len() as u32,
                cursor: begin as u32,
            });
            true
        } else {
            self.cands.truncate(begin);
            false
        }
    }

    fn out_of_budget(&self, lim: &Limits<'_>, delta: u64) -> bool {
        if lim.cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
            return true;
        }
        if let Some(shared) = lim.shared_nodes {
            if shared.fetch_add(delta, Ordering::Relaxed) + delta >= lim.node_limit {
                return true;
            }
        } else if self.nodes >= lim.node_limit {
            return true;
        }
        lim.deadline.is_some_and(|d| Instant::now() >= d)
    }
}
