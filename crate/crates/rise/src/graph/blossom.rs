//! Maximum-weight matching in general graphs by the primal-dual blossom
//! method (Edmonds), following the well-known O(n^3) formulation of Galil
//! as realized in Joris van Rantwijk's reference implementation.
//!
//! Weights are 64-bit floats. With `max_cardinality` the matching has
//! maximum cardinality first and maximum weight among those, which is how
//! minimum-weight perfect matchings are obtained (negate the costs).

const NONE: usize = usize::MAX;

const LABEL_FREE: u8 = 0;
const LABEL_S: u8 = 1;
const LABEL_T: u8 = 2;
// breadcrumb bit used while scanning for a blossom base
const LABEL_CRUMB: u8 = 4;

struct Matcher<'a> {
    nvertex: usize,
    edges: &'a [(usize, usize, f64)],
    max_cardinality: bool,
    // endpoint[p]: vertex attached to edge endpoint p (endpoints 2k, 2k+1 belong to edge k)
    endpoint: Vec<usize>,
    // neighbend[v]: remote endpoints of edges incident to v
    neighbend: Vec<Vec<usize>>,
    mate: Vec<usize>,
    label: Vec<u8>,
    labelend: Vec<usize>,
    inblossom: Vec<usize>,
    blossomparent: Vec<usize>,
    blossombase: Vec<usize>,
    blossomchilds: Vec<Vec<usize>>,
    blossomendps: Vec<Vec<usize>>,
    bestedge: Vec<usize>,
    blossombestedges: Vec<Vec<usize>>,
    unusedblossoms: Vec<usize>,
    dualvar: Vec<f64>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn new(nvertex: usize, edges: &'a [(usize, usize, f64)], max_cardinality: bool) -> Self {
        let nedge = edges.len();
        let maxweight = edges.iter().map(|e| e.2).fold(0.0f64, f64::max);
        let mut endpoint = Vec::with_capacity(2 * nedge);
        for &(i, j, _) in edges {
            endpoint.push(i);
            endpoint.push(j);
        }
        let mut neighbend = vec![Vec::new(); nvertex];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut dualvar = vec![maxweight; nvertex];
        dualvar.extend(std::iter::repeat_n(0.0, nvertex));
        Matcher {
            nvertex,
            edges,
            max_cardinality,
            endpoint,
            neighbend,
            mate: vec![NONE; nvertex],
            label: vec![LABEL_FREE; 2 * nvertex],
            labelend: vec![NONE; 2 * nvertex],
            inblossom: (0..nvertex).collect(),
            blossomparent: vec![NONE; 2 * nvertex],
            blossombase: (0..nvertex)
                .chain(std::iter::repeat_n(NONE, nvertex))
                .collect(),
            blossomchilds: vec![Vec::new(); 2 * nvertex],
            blossomendps: vec![Vec::new(); 2 * nvertex],
            bestedge: vec![NONE; 2 * nvertex],
            blossombestedges: vec![Vec::new(); 2 * nvertex],
            unusedblossoms: (nvertex..2 * nvertex).collect(),
            dualvar,
            allowedge: vec![false; nedge],
            queue: Vec::new(),
        }
    }

    #[inline]
    fn slack(&self, k: usize) -> f64 {
        let (i, j, wt) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2.0 * wt
    }

    fn blossom_leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.nvertex {
            out.push(b);
        } else {
            let mut stack = vec![b];
            while let Some(t) = stack.pop() {
                if t < self.nvertex {
                    out.push(t);
                } else {
                    stack.extend(self.blossomchilds[t].iter().copied());
                }
            }
        }
    }

    fn assign_label(&mut self, w: usize, t: u8, p: usize) {
        let b = self.inblossom[w];
        debug_assert!(self.label[w] == LABEL_FREE && self.label[b] == LABEL_FREE);
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = NONE;
        self.bestedge[b] = NONE;
        if t == LABEL_S {
            let mut leaves = Vec::new();
            self.blossom_leaves(b, &mut leaves);
            self.queue.extend(leaves);
        } else if t == LABEL_T {
            let base = self.blossombase[b];
            debug_assert!(self.mate[base] != NONE);
            let mate_ep = self.mate[base];
            self.assign_label(self.endpoint[mate_ep], LABEL_S, mate_ep ^ 1);
        }
    }

    /// Trace back from v and w to find the base of a new blossom, or NONE
    /// when an augmenting path was found instead.
    fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let (mut v, mut w) = (v, w);
        while v != NONE || w != NONE {
            let mut b = self.inblossom[v];
            if self.label[b] & LABEL_CRUMB != 0 {
                base = self.blossombase[b];
                break;
            }
            debug_assert_eq!(self.label[b], LABEL_S);
            path.push(b);
            self.label[b] = LABEL_S | LABEL_CRUMB;
            debug_assert_eq!(self.labelend[b], self.mate[self.blossombase[b]]);
            if self.labelend[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.labelend[b]];
                b = self.inblossom[v];
                debug_assert_eq!(self.label[b], LABEL_T);
                debug_assert!(self.labelend[b] != NONE);
                v = self.endpoint[self.labelend[b]];
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = LABEL_S;
        }
        base
    }

    /// Contract the cycle through edge k and base into a new blossom.
    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().expect("blossom pool exhausted");
        self.blossombase[b] = base;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b;

        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = b;
            path.push(bv);
            endps.push(self.labelend[bv]);
            debug_assert!(self.labelend[bv] != NONE);
            v = self.endpoint[self.labelend[bv]];
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = b;
            path.push(bw);
            endps.push(self.labelend[bw] ^ 1);
            debug_assert!(self.labelend[bw] != NONE);
            w = self.endpoint[self.labelend[bw]];
            bw = self.inblossom[w];
        }

        debug_assert_eq!(self.label[bb], LABEL_S);
        self.label[b] = LABEL_S;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0.0;
        let mut leaves = Vec::new();
        for &child in &path {
            self.blossom_leaves(child, &mut leaves);
        }
        for &v in &leaves {
            if self.label[self.inblossom[v]] == LABEL_T {
                self.queue.push(v);
            }
            self.inblossom[v] = b;
        }
        self.blossomchilds[b] = path;
        self.blossomendps[b] = endps;

        // Recompute the least-slack edges out of the new blossom.
        let mut bestedgeto = vec![NONE; 2 * self.nvertex];
        let children: Vec<usize> = self.blossomchilds[b].clone();
        for bv in children {
            let nblists: Vec<Vec<usize>> = if self.blossombestedges[bv].is_empty() {
                let mut leaves = Vec::new();
                self.blossom_leaves(bv, &mut leaves);
                leaves
                    .iter()
                    .map(|&v| self.neighbend[v].iter().map(|&p| p / 2).collect())
                    .collect()
            } else {
                vec![std::mem::take(&mut self.blossombestedges[bv])]
            };
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.inblossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == LABEL_S
                        && (bestedgeto[bj] == NONE || self.slack(k) < self.slack(bestedgeto[bj]))
                    {
                        bestedgeto[bj] = k;
                    }
                }
            }
            self.blossombestedges[bv] = Vec::new();
            self.bestedge[bv] = NONE;
        }
        let best: Vec<usize> = bestedgeto.into_iter().filter(|&k| k != NONE).collect();
        self.bestedge[b] = NONE;
        for &k in &best {
            if self.bestedge[b] == NONE || self.slack(k) < self.slack(self.bestedge[b]) {
                self.bestedge[b] = k;
            }
        }
        self.blossombestedges[b] = best;
    }

    /// Undo the contraction of blossom b.
    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        let childs = self.blossomchilds[b].clone();
        for &s in &childs {
            self.blossomparent[s] = NONE;
            if s < self.nvertex {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == 0.0 {
                self.expand_blossom(s, endstage);
            } else {
                let mut leaves = Vec::new();
                self.blossom_leaves(s, &mut leaves);
                for v in leaves {
                    self.inblossom[v] = s;
                }
            }
        }
        if !endstage && self.label[b] == LABEL_T {
            // The expanded blossom sits on an alternating path; relabel its
            // children along the path and leave the rest free.
            debug_assert!(self.labelend[b] != NONE);
            let entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]];
            let childs = &self.blossomchilds[b];
            let len = childs.len() as isize;
            let entry_idx = childs.iter().position(|&c| c == entrychild).unwrap() as isize;
            let (mut j, jstep, endptrick): (isize, isize, usize) = if entry_idx & 1 != 0 {
                (entry_idx - len, 1, 0)
            } else {
                (entry_idx, -1, 1)
            };
            let idx = move |j: isize| -> usize { (((j % len) + len) % len) as usize };
            let mut p = self.labelend[b];
            while j != 0 {
                self.label[self.endpoint[p ^ 1]] = LABEL_FREE;
                let ep = self.blossomendps[b][idx(j - endptrick as isize)] ^ endptrick ^ 1;
                self.label[self.endpoint[ep]] = LABEL_FREE;
                self.assign_label(self.endpoint[p ^ 1], LABEL_T, p);
                self.allowedge[self.blossomendps[b][idx(j - endptrick as isize)] / 2] = true;
                j += jstep;
                p = self.blossomendps[b][idx(j - endptrick as isize)] ^ endptrick;
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            let bv = self.blossomchilds[b][idx(j)];
            let pv = self.endpoint[p ^ 1];
            self.label[pv] = LABEL_T;
            self.label[bv] = LABEL_T;
            self.labelend[pv] = p;
            self.labelend[bv] = p;
            self.bestedge[bv] = NONE;
            j += jstep;
            while self.blossomchilds[b][idx(j)] != entrychild {
                let bv = self.blossomchilds[b][idx(j)];
                if self.label[bv] == LABEL_S {
                    j += jstep;
                    continue;
                }
                let mut leaves = Vec::new();
                self.blossom_leaves(bv, &mut leaves);
                let mut labeled = NONE;
                for &v in &leaves {
                    if self.label[v] != LABEL_FREE {
                        labeled = v;
                        break;
                    }
                }
                if labeled != NONE {
                    let v = labeled;
                    debug_assert_eq!(self.label[v], LABEL_T);
                    debug_assert_eq!(self.inblossom[v], bv);
                    self.label[v] = LABEL_FREE;
                    let base_mate = self.mate[self.blossombase[bv]];
                    self.label[self.endpoint[base_mate]] = LABEL_FREE;
                    let le = self.labelend[v];
                    self.assign_label(v, LABEL_T, le);
                }
                j += jstep;
            }
        }
        self.label[b] = LABEL_FREE;
        self.labelend[b] = NONE;
        self.blossomchilds[b] = Vec::new();
        self.blossomendps[b] = Vec::new();
        self.blossombase[b] = NONE;
        self.blossombestedges[b] = Vec::new();
        self.bestedge[b] = NONE;
        self.unusedblossoms.push(b);
    }

    /// Swap matched and unmatched edges along the path through blossom b
    /// from vertex v to the blossom base.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b {
            t = self.blossomparent[t];
        }
        if t >= self.nvertex {
            self.augment_blossom(t, v);
        }
        let len = self.blossomchilds[b].len() as isize;
        let i = self.blossomchilds[b].iter().position(|&c| c == t).unwrap() as isize;
        let (mut j, jstep, endptrick): (isize, isize, usize) = if i & 1 != 0 {
            (i - len, 1, 0)
        } else {
            (i, -1, 1)
        };
        let idx = |j: isize| -> usize { (((j % len) + len) % len) as usize };
        while j != 0 {
            j += jstep;
            let t = self.blossomchilds[b][idx(j)];
            let p = self.blossomendps[b][idx(j - endptrick as isize)] ^ endptrick;
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p]);
            }
            j += jstep;
            let t = self.blossomchilds[b][idx(j)];
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        let i = i as usize;
        self.blossomchilds[b].rotate_left(i);
        self.blossomendps[b].rotate_left(i);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        debug_assert_eq!(self.blossombase[b], v);
    }

    /// Swap matched and unmatched edges over the augmenting path through
    /// allowed edge k.
    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (s0, p0) in [(v, 2 * k + 1), (w, 2 * k)] {
            let mut s = s0;
            let mut p = p0;
            loop {
                let bs = self.inblossom[s];
                debug_assert_eq!(self.label[bs], LABEL_S);
                debug_assert_eq!(self.labelend[bs], self.mate[self.blossombase[bs]]);
                if bs >= self.nvertex {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.labelend[bs]];
                let bt = self.inblossom[t];
                debug_assert_eq!(self.label[bt], LABEL_T);
                debug_assert!(self.labelend[bt] != NONE);
                s = self.endpoint[self.labelend[bt]];
                let j = self.endpoint[self.labelend[bt] ^ 1];
                debug_assert_eq!(self.blossombase[bt], t);
                if bt >= self.nvertex {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    fn run(mut self) -> Vec<usize> {
        let nvertex = self.nvertex;
        if self.edges.is_empty() {
            return self.mate;
        }
        for _ in 0..nvertex {
            // New stage: clear labels and least-slack caches.
            self.label.iter_mut().for_each(|l| *l = LABEL_FREE);
            self.bestedge.iter_mut().for_each(|e| *e = NONE);
            for be in &mut self.blossombestedges[nvertex..] {
                be.clear();
            }
            self.allowedge.iter_mut().for_each(|a| *a = false);
            self.queue.clear();

            for v in 0..nvertex {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == LABEL_FREE {
                    self.assign_label(v, LABEL_S, NONE);
                }
            }

            let mut augmented = false;
            loop {
                while let Some(v) = self.queue.pop() {
                    debug_assert_eq!(self.label[self.inblossom[v]], LABEL_S);
                    let mut did_augment = false;
                    for idx in 0..self.neighbend[v].len() {
                        let p = self.neighbend[v][idx];
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        let mut kslack = 0.0;
                        if !self.allowedge[k] {
                            kslack = self.slack(k);
                            if kslack <= 0.0 {
                                self.allowedge[k] = true;
                            }
                        }
                        if self.allowedge[k] {
                            if self.label[self.inblossom[w]] == LABEL_FREE {
                                self.assign_label(w, LABEL_T, p ^ 1);
                            } else if self.label[self.inblossom[w]] == LABEL_S {
                                let base = self.scan_blossom(v, w);
                                if base != NONE {
                                    self.add_blossom(base, k);
                                } else {
                                    self.augment_matching(k);
                                    did_augment = true;
                                    break;
                                }
                            } else if self.label[w] == LABEL_FREE {
                                debug_assert_eq!(self.label[self.inblossom[w]], LABEL_T);
                                self.label[w] = LABEL_T;
                                self.labelend[w] = p ^ 1;
                            }
                        } else if self.label[self.inblossom[w]] == LABEL_S {
                            let b = self.inblossom[v];
                            if self.bestedge[b] == NONE || kslack < self.slack(self.bestedge[b]) {
                                self.bestedge[b] = k;
                            }
                        } else if self.label[w] == LABEL_FREE
                            && (self.bestedge[w] == NONE || kslack < self.slack(self.bestedge[w]))
                        {
                            self.bestedge[w] = k;
                        }
                    }
                    if did_augment {
                        augmented = true;
                        break;
                    }
                }
                if augmented {
                    break;
                }

                // No augmenting path under the current duals: compute the
                // largest safe dual change.
                let mut deltatype = -1i8;
                let mut delta = 0.0f64;
                let mut deltaedge = NONE;
                let mut deltablossom = NONE;

                if !self.max_cardinality {
                    deltatype = 1;
                    delta = self.dualvar[..nvertex]
                        .iter()
                        .fold(f64::INFINITY, |a, &b| a.min(b));
                }
                for v in 0..nvertex {
                    if self.label[self.inblossom[v]] == LABEL_FREE && self.bestedge[v] != NONE {
                        let d = self.slack(self.bestedge[v]);
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 2;
                            deltaedge = self.bestedge[v];
                        }
                    }
                }
                for b in 0..2 * nvertex {
                    if self.blossomparent[b] == NONE
                        && self.label[b] == LABEL_S
                        && self.bestedge[b] != NONE
                    {
                        let d = self.slack(self.bestedge[b]) / 2.0;
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 3;
                            deltaedge = self.bestedge[b];
                        }
                    }
                }
                for b in nvertex..2 * nvertex {
                    if self.blossombase[b] != NONE
                        && self.blossomparent[b] == NONE
                        && self.label[b] == LABEL_T
                        && (deltatype == -1 || self.dualvar[b] < delta)
                    {
                        delta = self.dualvar[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if deltatype == -1 {
                    // No further improvement; make the final duals nonnegative.
                    deltatype = 1;
                    delta = self.dualvar[..nvertex]
                        .iter()
                        .fold(f64::INFINITY, |a, &b| a.min(b))
                        .max(0.0);
                }

                for v in 0..nvertex {
                    match self.label[self.inblossom[v]] {
                        LABEL_S => self.dualvar[v] -= delta,
                        LABEL_T => self.dualvar[v] += delta,
                        _ => {}
                    }
                }
                for b in nvertex..2 * nvertex {
                    if self.blossombase[b] != NONE && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            LABEL_S => self.dualvar[b] += delta,
                            LABEL_T => self.dualvar[b] -= delta,
                            _ => {}
                        }
                    }
                }

                match deltatype {
                    1 => break, // optimum reached
                    2 => {
                        self.allowedge[deltaedge] = true;
                        let (mut i, j, _) = self.edges[deltaedge];
                        if self.label[self.inblossom[i]] == LABEL_FREE {
                            i = j;
                        }
                        debug_assert_eq!(self.label[self.inblossom[i]], LABEL_S);
                        self.queue.push(i);
                    }
                    3 => {
                        self.allowedge[deltaedge] = true;
                        let (i, _, _) = self.edges[deltaedge];
                        debug_assert_eq!(self.label[self.inblossom[i]], LABEL_S);
                        self.queue.push(i);
                    }
                    _ => self.expand_blossom(deltablossom, false),
                }
            }

            if !augmented {
                break;
            }

            // End of stage: expand all S-blossoms with zero dual.
            for b in nvertex..2 * nvertex {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] != NONE
                    && self.label[b] == LABEL_S
                    && self.dualvar[b] == 0.0
                {
                    self.expand_blossom(b, true);
                }
            }
        }

        for v in 0..nvertex {
            if self.mate[v] != NONE {
                self.mate[v] = self.endpoint[self.mate[v]];
            }
        }
        for v in 0..nvertex {
            debug_assert!(self.mate[v] == NONE || self.mate[self.mate[v]] == v);
        }
        self.mate
    }
}

/// Maximum-weight matching over `edges = (i, j, weight)` on vertices
/// `0..n`. Returns `mate` with `mate[v] = Some(w)` when v is matched to w.
/// With `max_cardinality`, only maximum-cardinality matchings are
/// considered.
pub fn max_weight_matching(
    n: usize,
    edges: &[(usize, usize, f64)],
    max_cardinality: bool,
) -> Vec<Option<usize>> {
    for &(i, j, _) in edges {
        assert!(i != j && i < n && j < n, "bad edge ({i},{j}) for n={n}");
    }
    Matcher::new(n, edges, max_cardinality)
        .run()
        .into_iter()
        .map(|m| if m == NONE { None } else { Some(m) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(mate: &[Option<usize>]) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = mate
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.filter(|&j| i < j).map(|j| (i, j)))
            .collect();
        out.sort_unstable();
        out
    }

    // Cases adapted from van Rantwijk's published test suite.
    #[test]
    fn trivial_cases() {
        assert_eq!(
            max_weight_matching(0, &[], false),
            Vec::<Option<usize>>::new()
        );
        let m = max_weight_matching(2, &[(0, 1, 1.0)], false);
        assert_eq!(pairs(&m), vec![(0, 1)]);
        let m = max_weight_matching(3, &[(1, 2, 10.0), (0, 1, 11.0)], false);
        assert_eq!(pairs(&m), vec![(0, 1)]);
        let m = max_weight_matching(4, &[(0, 1, 5.0), (1, 2, 11.0), (2, 3, 5.0)], false);
        assert_eq!(pairs(&m), vec![(1, 2)]);
    }

    #[test]
    fn max_cardinality_changes_answer() {
        let edges = [(0, 1, 5.0), (1, 2, 11.0), (2, 3, 5.0)];
        let m = max_weight_matching(4, &edges, true);
        assert_eq!(pairs(&m), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn negative_weights() {
        let edges = [
            (0, 1, 2.0),
            (0, 2, -2.0),
            (1, 2, 1.0),
            (1, 3, -1.0),
            (2, 3, -6.0),
        ];
        let m = max_weight_matching(4, &edges, false);
        assert_eq!(pairs(&m), vec![(0, 1)]);
        let m = max_weight_matching(4, &edges, true);
        assert_eq!(pairs(&m), vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn s_blossom_then_augment() {
        let edges = [(0, 1, 8.0), (0, 2, 9.0), (1, 2, 10.0), (2, 3, 7.0)];
        let m = max_weight_matching(4, &edges, false);
        assert_eq!(pairs(&m), vec![(0, 1), (2, 3)]);

        let edges = [
            (0, 1, 8.0),
            (0, 2, 9.0),
            (1, 2, 10.0),
            (2, 3, 7.0),
            (0, 5, 5.0),
            (3, 4, 6.0),
        ];
        let m = max_weight_matching(6, &edges, false);
        assert_eq!(pairs(&m), vec![(0, 5), (1, 2), (3, 4)]);
    }

    #[test]
    fn t_blossom_with_expansion() {
        let edges = [
            (0, 1, 9.0),
            (0, 2, 8.0),
            (1, 2, 10.0),
            (0, 3, 5.0),
            (3, 4, 4.0),
            (0, 5, 3.0),
        ];
        let m = max_weight_matching(6, &edges, false);
        assert_eq!(pairs(&m), vec![(0, 5), (1, 2), (3, 4)]);

        let edges = [
            (0, 1, 9.0),
            (0, 2, 8.0),
            (1, 2, 10.0),
            (0, 3, 5.0),
            (3, 4, 3.0),
            (0, 5, 4.0),
        ];
        let m = max_weight_matching(6, &edges, false);
        assert_eq!(pairs(&m), vec![(0, 5), (1, 2), (3, 4)]);
    }

    #[test]
    fn nested_s_blossom() {
        let edges = [
            (0, 1, 9.0),
            (0, 2, 9.0),
            (1, 2, 10.0),
            (1, 3, 8.0),
            (2, 4, 8.0),
            (3, 4, 10.0),
            (4, 5, 6.0),
        ];
        let m = max_weight_matching(6, &edges, false);
        assert_eq!(pairs(&m), vec![(0, 2), (1, 3), (4, 5)]);
    }

    #[test]
    fn blossom_relabeled_and_expanded() {
        // create blossom, relabel as T, use for augmentation
        let edges = [
            (0, 1, 45.0),
            (0, 4, 45.0),
            (1, 2, 50.0),
            (2, 3, 45.0),
            (3, 4, 50.0),
            (0, 5, 30.0),
            (2, 8, 35.0),
            (4, 6, 35.0),
            (6, 7, 5.0),
            (8, 9, 5.0),
        ];
        let m = max_weight_matching(10, &edges, false);
        assert_eq!(pairs(&m), vec![(0, 5), (1, 2), (3, 4), (6, 7), (8, 9)]);
    }

    // Exhaustive maximum-weight matching by branching on the lowest
    // uncovered vertex; independent of the primal-dual code above.
    fn brute_force(n: usize, edges: &[(usize, usize, f64)], max_cardinality: bool) -> (usize, f64) {
        fn rec(
            n: usize,
            adj: &[Vec<(usize, f64)>],
            used: &mut [bool],
            v: usize,
            card: usize,
            wt: f64,
            best: &mut (usize, f64),
            max_cardinality: bool,
        ) {
            let mut v = v;
            while v < n && used[v] {
                v += 1;
            }
            if v == n {
                let better = if max_cardinality {
                    card > best.0 || (card == best.0 && wt > best.1)
                } else {
                    wt > best.1
                };
                if better {
                    *best = (card, wt);
                }
                return;
            }
            used[v] = true;
            // leave v unmatched
            rec(n, adj, used, v + 1, card, wt, best, max_cardinality);
            for &(w, ew) in &adj[v] {
                if !used[w] {
                    used[w] = true;
                    rec(
                        n,
                        adj,
                        used,
                        v + 1,
                        card + 1,
                        wt + ew,
                        best,
                        max_cardinality,
                    );
                    used[w] = false;
                }
            }
            used[v] = false;
        }
        let mut adj = vec![Vec::new(); n];
        for &(i, j, w) in edges {
            adj[i.min(j)].push((i.max(j), w));
        }
        let mut best = (0, f64::NEG_INFINITY);
        let mut used = vec![false; n];
        rec(n, &adj, &mut used, 0, 0, 0.0, &mut best, max_cardinality);
        if best.1 == f64::NEG_INFINITY {
            best.1 = 0.0;
        }
        best
    }

    fn matching_stats(edges: &[(usize, usize, f64)], mate: &[Option<usize>]) -> (usize, f64) {
        let set: std::collections::HashSet<(usize, usize)> = pairs(mate).into_iter().collect();
        let wt = edges
            .iter()
            .filter(|&&(i, j, _)| set.contains(&(i.min(j), i.max(j))))
            .map(|e| e.2)
            .sum();
        (set.len(), wt)
    }

    #[test]
    fn agrees_with_brute_force_on_random_graphs() {
        // simple xorshift so the test needs no rng dependency
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..300 {
            let n = 3 + (next() % 6) as usize; // 3..=8
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if next() % 4 != 0 {
                        // mixed-sign weights, small integer grid to force ties
                        let w = ((next() % 41) as f64) - 8.0;
                        edges.push((i, j, w));
                    }
                }
            }
            for &mc in &[false, true] {
                let mate = max_weight_matching(n, &edges, mc);
                let got = matching_stats(&edges, &mate);
                let want = brute_force(n, &edges, mc);
                if mc {
                    assert_eq!(got.0, want.0, "cardinality trial={trial} n={n} {edges:?}");
                }
                assert!(
                    (got.1 - want.1).abs() < 1e-9,
                    "weight trial={trial} n={n} got={got:?} want={want:?} {edges:?}"
                );
            }
        }
    }
}
