//! Base structures: one-face maps with every vertex of degree at least 3,
//! encoded by a palindromic fixed-point-free involution `ε` on the barred
//! alphabet over `1..2m`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::perm::{compose, Carrier, Label, Perm, PermError};
use crate::Symmetry;

pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum BaseError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("invalid base structure: {0}")]
    Invalid(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// `(j k)(k̄ j̄)`: the two sides are walked in opposite directions.
    Unitary,
    /// `(j k̄)(k j̄)`: both sides walked the same way.
    Orthogonal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRecord {
    pub half_cycle: (Label, Label),
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexRecord {
    pub half_cycle: Vec<Label>,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseStructure {
    pub m: u32,
    pub epsilon: Perm,
    pub nu: Perm,
    pub edges: Vec<EdgeRecord>,
    pub vertices: Vec<VertexRecord>,
    pub genus2: u32,
    pub orientable: bool,
}

/// `(1 2 … 2m)(2m̄ … 2̄ 1̄)`.
pub fn face_perm(m: u32) -> Perm {
    let n = 2 * m;
    let images = (0..2 * n)
        .map(|c| if c < n { (c + 1) % n } else { n + (c - n + n - 1) % n })
        .collect();
    Perm::from_images(n, Carrier::Barred, images).expect("face permutation")
}

/// `(1 2 … 2m)` on the reduced alphabet.
pub fn reduced_face_perm(m: u32) -> Perm {
    let n = 2 * m;
    Perm::from_images(n, Carrier::Reduced, (0..n).map(|c| (c + 1) % n).collect()).expect("face")
}

/// Checks that `epsilon` is a fixed-point-free involution without `(x x̄)`
/// cycles commuting with the bar map.
pub fn check_involution(epsilon: &Perm) -> Result<(), BaseError> {
    let n = epsilon.points();
    if epsilon.carrier() == Carrier::Reduced {
        for c in 0..n {
            let e = epsilon.apply_code(c);
            if e == c || epsilon.apply_code(e) != c {
                return Err(BaseError::Invalid("reduced epsilon is not a fixed-point-free involution".into()));
            }
        }
        return Ok(());
    }
    let flip = |c: u32| (c + n) % (2 * n);
    for c in 0..2 * n {
        let e = epsilon.apply_code(c);
        if e == c || epsilon.apply_code(e) != c {
            return Err(BaseError::Invalid("epsilon is not a fixed-point-free involution".into()));
        }
        if e == flip(c) {
            return Err(BaseError::Invalid("epsilon has a cycle (x x̄)".into()));
        }
        if epsilon.apply_code(flip(c)) != flip(e) {
            return Err(BaseError::Invalid("epsilon does not commute with the bar map".into()));
        }
    }
    Ok(())
}

/// `ν = φ ε` (or `ν̃ = φ̃ ε̃` on the reduced alphabet).
pub fn vertex_perm(epsilon: &Perm) -> Result<Perm, BaseError> {
    if epsilon.points() % 2 == 1 {
        return Err(BaseError::Invalid("odd number of edge sides".into()));
    }
    check_involution(epsilon)?;
    let m = epsilon.points() / 2;
    let phi = match epsilon.carrier() {
        Carrier::Barred => face_perm(m),
        Carrier::Reduced => reduced_face_perm(m),
    };
    Ok(compose(&phi, epsilon)?)
}

impl BaseStructure {
    /// Builds and validates a structure from its canonical half
    /// `(s₁ r₁)…(s_m r_m)`.
    pub fn from_pairs(m: u32, pairs: &[(Label, Label)]) -> Result<Self, BaseError> {
        if pairs.len() != m as usize {
            return Err(BaseError::Invalid(format!("expected {m} pairs, got {}", pairs.len())));
        }
        check_canonical(m, pairs)?;
        let n = 2 * m;
        let mut cycles = Vec::with_capacity(2 * pairs.len());
        for &(s, r) in pairs {
            cycles.push(vec![s, r]);
            cycles.push(vec![r.flip(), s.flip()]);
        }
        let epsilon = Perm::from_cycles(n, Carrier::Barred, &cycles)?;
        let nu = vertex_perm(&epsilon)?;
        if !mirror_pairs_cycles(&nu, &epsilon) {
            return Err(BaseError::Invalid("a vertex cycle is its own mirror".into()));
        }
        if let Some(c) = nu.cycles().iter().find(|c| c.len() < 3) {
            return Err(BaseError::Invalid(format!("vertex of degree {}", c.len())));
        }
        let v = nu.num_cycles() / 2;
        let genus2 = 1 + m - v as u32;
        let edges: Vec<EdgeRecord> = pairs
            .iter()
            .map(|&(s, r)| EdgeRecord {
                half_cycle: (s, r),
                kind: if r.barred { EdgeKind::Orthogonal } else { EdgeKind::Unitary },
            })
            .collect();
        let orientable = edges.iter().all(|e| e.kind == EdgeKind::Unitary);
        let vertices = representative_cycles(&nu, &epsilon)
            .into_iter()
            .map(|c| VertexRecord { degree: c.len(), half_cycle: c.iter().map(|&x| nu.decode(x)).collect() })
            .collect();
        Ok(BaseStructure { m, epsilon, nu, edges, vertices, genus2, orientable })
    }

    pub fn pairs(&self) -> Vec<(Label, Label)> {
        self.edges.iter().map(|e| e.half_cycle).collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Canonical half of `ε` as `"a:b,c:d"` with barred labels negative.
    pub fn to_line(&self) -> String {
        self.edges
            .iter()
            .map(|e| format!("{}:{}", e.half_cycle.0, e.half_cycle.1))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_line(m: u32, line: &str) -> Result<Self, BaseError> {
        let mut pairs = Vec::new();
        for tok in line.trim().split(',') {
            let (a, b) = tok
                .split_once(':')
                .ok_or_else(|| BaseError::Invalid(format!("bad pair {tok:?}")))?;
            let a: i64 = a.trim().parse().map_err(|_| BaseError::Invalid(format!("bad label {a:?}")))?;
            let b: i64 = b.trim().parse().map_err(|_| BaseError::Invalid(format!("bad label {b:?}")))?;
            pairs.push((Label::from_signed(a)?, Label::from_signed(b)?));
        }
        BaseStructure::from_pairs(m, &pairs)
    }

    /// The half of `ε` in human cycle notation, e.g. `(1 3)(2 4̄)`.
    pub fn half_human(&self) -> String {
        self.edges
            .iter()
            .map(|e| format!("({} {})", e.half_cycle.0.human(), e.half_cycle.1.human()))
            .collect()
    }
}

/// The mirror map `ψ(z) = bar(ε(z))`. It conjugates `ν` to `ν⁻¹`, so it
/// sends each vertex cycle to the reversed other cycle of the same vertex.
pub fn mirror(epsilon: &Perm, code: u32) -> u32 {
    let n = epsilon.points();
    (epsilon.apply_code(code) + n) % (2 * n)
}

fn cycle_owner(nu: &Perm) -> Vec<usize> {
    let mut owner = vec![usize::MAX; nu.len()];
    for (i, c) in nu.cycles().iter().enumerate() {
        for &x in c {
            owner[x as usize] = i;
        }
    }
    owner
}

/// True when `ψ` maps no cycle of `ν` onto itself.
pub fn mirror_pairs_cycles(nu: &Perm, epsilon: &Perm) -> bool {
    let owner = cycle_owner(nu);
    nu.cycles().iter().enumerate().all(|(i, c)| owner[mirror(epsilon, c[0]) as usize] != i)
}

/// One cycle out of each mirror pair, the one holding the smaller code.
pub fn representative_cycles(nu: &Perm, epsilon: &Perm) -> Vec<Vec<u32>> {
    let owner = cycle_owner(nu);
    let mut taken = vec![false; nu.num_cycles()];
    let mut out = Vec::new();
    for (i, c) in nu.cycles().iter().enumerate() {
        if taken[i] {
            continue;
        }
        taken[i] = true;
        taken[owner[mirror(epsilon, c[0]) as usize]] = true;
        out.push(c.clone());
    }
    out
}

fn check_canonical(m: u32, pairs: &[(Label, Label)]) -> Result<(), BaseError> {
    let n = 2 * m;
    let mut used = vec![false; n as usize + 1];
    let mut prev = 0;
    for &(s, r) in pairs {
        for l in [s, r] {
            if l.index == 0 || l.index > n {
                return Err(BaseError::Invalid(format!("label {l} out of range")));
            }
            if used[l.index as usize] {
                return Err(BaseError::Invalid(format!("label {} used twice", l.index)));
            }
            used[l.index as usize] = true;
        }
        if s.barred {
            return Err(BaseError::Invalid(format!("first entry {s} must be unbarred")));
        }
        if r.index <= s.index {
            return Err(BaseError::Invalid(format!("pair ({s} {r}) is not canonical")));
        }
        if s.index < prev {
            return Err(BaseError::Invalid("pairs are not sorted".into()));
        }
        prev = s.index;
    }
    // The smallest unused orbit is always the next first entry, so with
    // sorted first entries every orbit 1..2m appears exactly once.
    Ok(())
}

/// Options for the canonical backtracking search.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Only structures with exactly this `2g` are produced.
    pub genus2: Option<u32>,
    /// Prune with the partially built vertex permutation. Pure optimization.
    pub prune: bool,
}

/// Visits every canonical half `(s₁ r₁)…(s_m r_m)` whose vertex permutation
/// has no cycle shorter than 3, in lexicographic order of the choices.
pub fn search(m: u32, symmetry: Symmetry, opts: SearchOptions, mut visit: impl FnMut(&[(Label, Label)])) {
    assert!(m >= 1);
    let reduced = symmetry == Symmetry::Unitary;
    let mut st = SearchState::new(m, reduced, opts);
    st.recurse(&mut visit);
}

pub fn enumerate(m: u32, symmetry: Symmetry) -> Vec<BaseStructure> {
    collect(m, symmetry, SearchOptions { genus2: None, prune: false })
}

/// Structures with `m` edges and the given `2g`. Pruning is enabled from
/// `2g = 4` on; below that the degree filter runs on the finished `ν`.
pub fn enumerate_genus(m: u32, symmetry: Symmetry, genus2: u32) -> Vec<BaseStructure> {
    collect(m, symmetry, SearchOptions { genus2: Some(genus2), prune: genus2 >= 4 })
}

pub fn collect(m: u32, symmetry: Symmetry, opts: SearchOptions) -> Vec<BaseStructure> {
    let mut out = Vec::new();
    search(m, symmetry, opts, |pairs| {
        out.push(BaseStructure::from_pairs(m, pairs).expect("search yields valid structures"));
    });
    out
}

/// Edge counts that can carry a structure of the given `2g`: from
/// `V ≥ 1` and `2m ≥ 3V` with `V = m + 1 − 2g`.
pub fn edge_range(genus2: u32) -> std::ops::RangeInclusive<u32> {
    genus2.max(1)..=(3 * genus2).saturating_sub(3)
}

pub fn count_by_genus(genus2: u32, symmetry: Symmetry) -> BTreeMap<u32, usize> {
    let mut out = BTreeMap::new();
    for m in edge_range(genus2) {
        let mut count = 0usize;
        search(m, symmetry, SearchOptions { genus2: Some(genus2), prune: genus2 >= 4 }, |_| count += 1);
        if count > 0 {
            out.insert(m, count);
        }
    }
    out
}

pub fn genus2(structure: &BaseStructure) -> u32 {
    1 + structure.m - structure.num_vertices() as u32
}

struct SearchState {
    m: u32,
    reduced: bool,
    /// Carrier size: `2m` reduced, `4m` barred.
    size: u32,
    opts: SearchOptions,
    target_cycles: Option<u32>,
    matched: Vec<bool>,
    pairs: Vec<(Label, Label)>,
    // Chains of the partial vertex permutation.
    head_of: Vec<u32>,
    tail_of: Vec<u32>,
    len_of: Vec<u32>,
    closed: u32,
    closed_elems: u32,
    /// Open chains of length 1, 2 and at least 3.
    chains: [u32; 3],
    /// Longest cycle compatible with the target cycle count.
    max_len: u32,
}

impl SearchState {
    fn new(m: u32, reduced: bool, opts: SearchOptions) -> Self {
        let size = if reduced { 2 * m } else { 4 * m };
        let target_cycles = opts.genus2.map(|g| {
            let v = (m + 1).saturating_sub(g);
            if reduced {
                v
            } else {
                2 * v
            }
        });
        SearchState {
            m,
            reduced,
            size,
            opts,
            target_cycles,
            matched: vec![false; 2 * m as usize + 1],
            pairs: Vec::with_capacity(m as usize),
            head_of: (0..size).collect(),
            tail_of: (0..size).collect(),
            len_of: vec![1; size as usize],
            closed: 0,
            closed_elems: 0,
            chains: [size, 0, 0],
            max_len: target_cycles
                .filter(|_| opts.prune)
                .map_or(size, |t| size.saturating_sub(3 * t.saturating_sub(1))),
        }
    }

    fn code(&self, l: Label) -> u32 {
        l.index - 1 + if l.barred { 2 * self.m } else { 0 }
    }

    fn phi(&self, c: u32) -> u32 {
        let n = 2 * self.m;
        if c < n {
            (c + 1) % n
        } else {
            n + (c - n + n - 1) % n
        }
    }

    fn flip(&self, c: u32) -> u32 {
        let n = 2 * self.m;
        (c + n) % (2 * n)
    }

    /// Adds `ν(a) = b`. Returns undo data and whether a cycle was closed
    /// (with its length).
    fn link(&mut self, a: u32, b: u32) -> (Undo, Option<u32>) {
        let ha = self.head_of[a as usize];
        let tb = self.tail_of[b as usize];
        let undo = Undo {
            ha,
            tail_ha: self.tail_of[ha as usize],
            tb,
            head_tb: self.head_of[tb as usize],
            len_ha: self.len_of[ha as usize],
        };
        if ha == b {
            let l = self.len_of[b as usize];
            self.closed += 1;
            self.closed_elems += l;
            self.chains[class(l)] -= 1;
            (undo, Some(l))
        } else {
            let (la, lb) = (self.len_of[ha as usize], self.len_of[b as usize]);
            self.tail_of[ha as usize] = tb;
            self.head_of[tb as usize] = ha;
            self.len_of[ha as usize] = la + lb;
            self.chains[class(la)] -= 1;
            self.chains[class(lb)] -= 1;
            self.chains[class(la + lb)] += 1;
            (undo, None)
        }
    }

    fn unlink(&mut self, u: &Undo, closed: Option<u32>) {
        if let Some(l) = closed {
            self.closed -= 1;
            self.closed_elems -= l;
            self.chains[class(l)] += 1;
        } else {
            let la = u.len_ha;
            let lb = self.len_of[u.ha as usize] - la;
            self.chains[class(la + lb)] -= 1;
            self.chains[class(la)] += 1;
            self.chains[class(lb)] += 1;
            self.tail_of[u.ha as usize] = u.tail_ha;
            self.head_of[u.tb as usize] = u.head_tb;
            self.len_of[u.ha as usize] = u.len_ha;
        }
    }

    fn viable(&self, short_cycle: bool) -> bool {
        if short_cycle {
            return false;
        }
        let Some(t) = self.target_cycles else { return true };
        if !self.opts.prune {
            return true;
        }
        let open = self.size - self.closed_elems;
        let [c1, c2, long] = self.chains;
        self.closed + u32::from(open > 0) <= t && self.closed + long + (c1 + 2 * c2) / 3 >= t
    }

    fn recurse(&mut self, visit: &mut impl FnMut(&[(Label, Label)])) {
        let n = 2 * self.m;
        let Some(s) = (1..=n).find(|&x| !self.matched[x as usize]) else {
            if self.target_cycles.is_none_or(|t| self.closed == t) {
                visit(&self.pairs);
            }
            return;
        };
        self.matched[s as usize] = true;
        for x in s + 1..=n {
            if self.matched[x as usize] {
                continue;
            }
            self.matched[x as usize] = true;
            for barred in [false, true] {
                if barred && self.reduced {
                    continue;
                }
                let sl = Label::plain(s);
                let rl = Label { index: x, barred };
                let sc = self.code(sl);
                let rc = self.code(rl);
                let mut arcs: Vec<(u32, u32)> = vec![(sc, self.phi(rc)), (rc, self.phi(sc))];
                if !self.reduced {
                    let (sb, rb) = (self.flip(sc), self.flip(rc));
                    arcs.push((sb, self.phi(rb)));
                    arcs.push((rb, self.phi(sb)));
                }
                let mut undos = Vec::with_capacity(4);
                let mut short = false;
                for &(a, b) in &arcs {
                    let (u, closed) = self.link(a, b);
                    undos.push((u, closed));
                    if closed.is_some_and(|l| l < 3) || self.len_of[self.head_of[a as usize] as usize] > self.max_len {
                        short = true;
                        break;
                    }
                }
                if self.viable(short) {
                    self.pairs.push((sl, rl));
                    self.recurse(visit);
                    self.pairs.pop();
                }
                for (u, closed) in undos.iter().rev() {
                    self.unlink(u, *closed);
                }
            }
            self.matched[x as usize] = false;
        }
        self.matched[s as usize] = false;
    }
}

fn class(len: u32) -> usize {
    (len.min(3) - 1) as usize
}

struct Undo {
    ha: u32,
    tail_ha: u32,
    tb: u32,
    head_tb: u32,
    len_ha: u32,
}

/// Structures of one `2g`, grouped by `m`.
pub type Catalogue = BTreeMap<u32, Vec<BaseStructure>>;

fn cache_file(dir: &Path, genus2: u32, symmetry: Symmetry, m: u32) -> PathBuf {
    dir.join(format!("bases-g{genus2}-{symmetry}-m{m}.txt"))
}

fn header(genus2: u32, symmetry: Symmetry, m: u32) -> String {
    format!("# bases version={CACHE_VERSION} m={m} symmetry={symmetry} genus2={genus2}")
}

pub fn save_cache(dir: &Path, genus2: u32, symmetry: Symmetry, m: u32, list: &[BaseStructure]) -> Result<(), BaseError> {
    fs::create_dir_all(dir)?;
    let path = cache_file(dir, genus2, symmetry, m);
    let tmp = path.with_extension("tmp");
    {
        let mut w = std::io::BufWriter::new(fs::File::create(&tmp)?);
        writeln!(w, "{}", header(genus2, symmetry, m))?;
        for b in list {
            writeln!(w, "{}", b.to_line())?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(())
}

/// Loads one cached file, re-validating every structure. `Ok(None)` when the
/// file does not exist.
pub fn load_cache(dir: &Path, genus2: u32, symmetry: Symmetry, m: u32) -> Result<Option<Vec<BaseStructure>>, BaseError> {
    let path = cache_file(dir, genus2, symmetry, m);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut lines = text.lines();
    let head = lines.next().unwrap_or("");
    if head != header(genus2, symmetry, m) {
        return Err(BaseError::Cache(format!("{}: unexpected header {head:?}", path.display())));
    }
    let mut out = Vec::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let b = BaseStructure::parse_line(m, line)?;
        if b.genus2 != genus2 || (symmetry == Symmetry::Unitary && !b.orientable) {
            return Err(BaseError::Cache(format!("{}: structure {line} does not belong here", path.display())));
        }
        out.push(b);
    }
    Ok(Some(out))
}

/// All structures of the given `2g` and symmetry, optionally through a cache
/// directory. Results are identical with or without the cache.
pub fn catalogue(genus2: u32, symmetry: Symmetry, cache: Option<&Path>) -> Result<Catalogue, BaseError> {
    let mut out = Catalogue::new();
    for m in edge_range(genus2) {
        let list = match cache.map(|d| load_cache(d, genus2, symmetry, m)).transpose()?.flatten() {
            Some(l) => l,
            None => {
                let l = enumerate_genus(m, symmetry, genus2);
                if let Some(d) = cache {
                    save_cache(d, genus2, symmetry, m, &l)?;
                }
                l
            }
        };
        if !list.is_empty() {
            out.insert(m, list);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn bp(n: u32, s: &str) -> Perm {
        Perm::parse(n, Carrier::Barred, s).unwrap()
    }

    #[test]
    fn face_perms() {
        assert_eq!(face_perm(1), bp(2, "(1 2)(-2 -1)"));
        assert_eq!(face_perm(2), bp(4, "(1 2 3 4)(-4 -3 -2 -1)"));
        assert_eq!(face_perm(3), bp(6, "(1 2 3 4 5 6)(-6 -5 -4 -3 -2 -1)"));
    }

    #[test]
    fn vertex_perm_examples() {
        let eps = bp(6, "(1 4)(2 -3)(5 -6)(-5 6)(-2 3)(-1 -4)");
        assert_eq!(vertex_perm(&eps).unwrap(), bp(6, "(1 5 -5)(-4 -6 6)(2 -2 4)(-1 -3 3)"));
        let r = |s: &str| Perm::parse(4, Carrier::Reduced, s).unwrap();
        assert_eq!(vertex_perm(&r("(1 3)(2 4)")).unwrap(), r("(1 4 3 2)"));
        let r6 = |s: &str| Perm::parse(6, Carrier::Reduced, s).unwrap();
        assert_eq!(vertex_perm(&r6("(1 4)(2 5)(3 6)")).unwrap(), r6("(1 5 3)(2 6 4)"));
        assert!(vertex_perm(&bp(4, "(1 -1)(2 3)(-2 -3)(4 -4)")).is_err());
        assert!(vertex_perm(&bp(4, "(1 2)(3 4)")).is_err());
    }

    fn set(list: &[BaseStructure]) -> BTreeSet<String> {
        list.iter().map(|b| b.to_line()).collect()
    }

    #[test]
    fn genus_one_listing() {
        let m2 = enumerate_genus(2, Symmetry::Orthogonal, 2);
        let want: BTreeSet<String> =
            ["1:3,2:4", "1:-2,3:-4", "1:3,2:-4", "1:-3,2:4", "1:-4,2:-3"].iter().map(|s| s.to_string()).collect();
        assert_eq!(set(&m2), want);
        let m3 = enumerate_genus(3, Symmetry::Orthogonal, 2);
        let want: BTreeSet<String> = [
            "1:4,2:5,3:6",
            "1:-2,3:6,4:-5",
            "1:-3,2:5,4:-6",
            "1:4,2:-3,5:-6",
            "1:4,2:-6,3:-5",
            "1:-5,2:-4,3:6",
            "1:-6,2:5,3:-4",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(set(&m3), want);
        let u: Vec<String> = [2, 3].iter().flat_map(|&m| enumerate_genus(m, Symmetry::Unitary, 2)).map(|b| b.to_line()).collect();
        assert_eq!(u, vec!["1:3,2:4".to_string(), "1:4,2:5,3:6".to_string()]);
    }

    #[test]
    fn genus_of_examples() {
        for (m, line) in [(2, "1:3,2:4"), (3, "1:4,2:5,3:6"), (2, "1:-2,3:-4")] {
            let b = BaseStructure::parse_line(m, line).unwrap();
            assert_eq!(b.genus2, 2);
            assert_eq!(genus2(&b), 2);
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_by_genus(2, Symmetry::Orthogonal), BTreeMap::from([(2, 5), (3, 7)]));
        assert_eq!(count_by_genus(2, Symmetry::Unitary), BTreeMap::from([(2, 1), (3, 1)]));
        assert_eq!(count_by_genus(3, Symmetry::Orthogonal), BTreeMap::from([(3, 41), (4, 198), (5, 285), (6, 128)]));
        assert!(count_by_genus(3, Symmetry::Unitary).is_empty());
        assert!(count_by_genus(1, Symmetry::Orthogonal).is_empty());
    }

    #[test]
    fn pruning_does_not_change_output() {
        for g in [2, 3] {
            for m in edge_range(g) {
                for sym in [Symmetry::Orthogonal, Symmetry::Unitary] {
                    let a = collect(m, sym, SearchOptions { genus2: Some(g), prune: false });
                    let b = collect(m, sym, SearchOptions { genus2: Some(g), prune: true });
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn unitary_is_orientable_subset() {
        for g in [2, 3, 4] {
            for m in edge_range(g).take(2) {
                let o: Vec<String> =
                    enumerate_genus(m, Symmetry::Orthogonal, g).into_iter().filter(|b| b.orientable).map(|b| b.to_line()).collect();
                let u: Vec<String> = enumerate_genus(m, Symmetry::Unitary, g).into_iter().map(|b| b.to_line()).collect();
                assert_eq!(o, u);
            }
        }
    }

    #[test]
    fn structure_invariants() {
        for m in 2..=4 {
            for b in enumerate(m, Symmetry::Orthogonal) {
                check_involution(&b.epsilon).unwrap();
                assert_eq!(b.nu, compose(&face_perm(m), &b.epsilon).unwrap());
                assert!(mirror_pairs_cycles(&b.nu, &b.epsilon));
                assert!(b.epsilon.is_palindromic());
                let v = b.num_vertices() as u32;
                assert!(b.genus2 >= 2);
                assert!(2 * m >= 3 * v);
                assert!(v <= 2 * (b.genus2 - 1));
                assert!(b.vertices.iter().all(|x| x.degree >= 3));
                assert_eq!(b.vertices.iter().map(|x| x.degree).sum::<usize>(), 2 * m as usize);
                if b.orientable {
                    assert_eq!(b.genus2 % 2, 0);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(BaseStructure::parse_line(2, "1:2,3:4").is_err()); // degree-2 vertices
        assert!(BaseStructure::parse_line(2, "2:4,1:3").is_err());
        assert!(BaseStructure::parse_line(2, "1:3,2:3").is_err());
        assert!(BaseStructure::parse_line(2, "1:3").is_err());
        assert!(BaseStructure::parse_line(2, "1:-1,2:4").is_err());
        assert!(BaseStructure::parse_line(2, "-1:3,2:4").is_err());
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let a = catalogue(3, Symmetry::Orthogonal, Some(dir.path())).unwrap();
        let b = catalogue(3, Symmetry::Orthogonal, Some(dir.path())).unwrap();
        let c = catalogue(3, Symmetry::Orthogonal, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        let path = cache_file(dir.path(), 3, Symmetry::Orthogonal, 3);
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replace("1:", "2:")).unwrap();
        assert!(catalogue(3, Symmetry::Orthogonal, Some(dir.path())).is_err());
    }
}
