//! Permutations on the barred alphabet `{1..n, n̄..1̄}` and on the reduced
//! alphabet `{1..n}`.
//!
//! Labels are encoded as dense codes: `x` becomes `x - 1` and `x̄` becomes
//! `x - 1 + n`, so every ordering comparison agrees with the rule that a
//! barred label sorts after all unbarred ones.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("label {0} out of range for {1} points")]
    OutOfRange(i64, u32),
    #[error("label {0} appears more than once")]
    Repeated(String),
    #[error("image list is not a bijection")]
    NotBijection,
    #[error("barred label {0} on a reduced carrier")]
    BarredOnReduced(String),
    #[error("operation needs the barred carrier")]
    NeedsBarred,
    #[error("parse error: {0}")]
    Parse(String),
}

/// A letter of the barred alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub index: u32,
    pub barred: bool,
}

impl Label {
    pub fn plain(index: u32) -> Self {
        Label { index, barred: false }
    }

    pub fn bar(index: u32) -> Self {
        Label { index, barred: true }
    }

    /// `bar(bar(z)) = z`.
    pub fn flip(self) -> Self {
        Label { index: self.index, barred: !self.barred }
    }

    /// Signed form used by the machine format: barred labels are negative.
    pub fn signed(self) -> i64 {
        if self.barred {
            -(self.index as i64)
        } else {
            self.index as i64
        }
    }

    pub fn from_signed(v: i64) -> Result<Self, PermError> {
        if v == 0 {
            return Err(PermError::Parse("label 0".into()));
        }
        Ok(Label { index: v.unsigned_abs() as u32, barred: v < 0 })
    }

    pub fn human(self) -> String {
        if self.barred {
            self.index.to_string().chars().flat_map(|c| [c, '\u{0305}']).collect()
        } else {
            self.index.to_string()
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.signed())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Carrier {
    /// `{1..n} ∪ {1̄..n̄}`, `2n` points.
    Barred,
    /// `{1..n}` only.
    Reduced,
}

/// A bijection stored as a dense image array over label codes.
#[derive(Clone)]
pub struct Perm {
    points: u32,
    carrier: Carrier,
    images: Vec<u32>,
    cycles: OnceLock<Vec<Vec<u32>>>,
}

impl PartialEq for Perm {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.carrier == other.carrier && self.images == other.images
    }
}

impl Eq for Perm {}

impl std::hash::Hash for Perm {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.points.hash(state);
        self.carrier.hash(state);
        self.images.hash(state);
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]", self.to_machine_string())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_machine_string())
    }
}

impl Perm {
    pub fn identity(points: u32, carrier: Carrier) -> Self {
        let len = carrier_len(points, carrier);
        Perm::raw(points, carrier, (0..len as u32).collect())
    }

    fn raw(points: u32, carrier: Carrier, images: Vec<u32>) -> Self {
        Perm { points, carrier, images, cycles: OnceLock::new() }
    }

    pub fn from_images(points: u32, carrier: Carrier, images: Vec<u32>) -> Result<Self, PermError> {
        let len = carrier_len(points, carrier);
        if images.len() != len {
            return Err(PermError::NotBijection);
        }
        let mut seen = vec![false; len];
        for &x in &images {
            let x = x as usize;
            if x >= len || seen[x] {
                return Err(PermError::NotBijection);
            }
            seen[x] = true;
        }
        Ok(Perm::raw(points, carrier, images))
    }

    /// Builds a permutation from disjoint cycles; unmentioned labels are fixed.
    pub fn from_cycles(points: u32, carrier: Carrier, cycles: &[Vec<Label>]) -> Result<Self, PermError> {
        let len = carrier_len(points, carrier);
        let mut images: Vec<u32> = (0..len as u32).collect();
        let mut seen = vec![false; len];
        for cycle in cycles {
            let codes = cycle
                .iter()
                .map(|&l| encode(points, carrier, l))
                .collect::<Result<Vec<_>, _>>()?;
            for (k, &c) in codes.iter().enumerate() {
                if seen[c as usize] {
                    return Err(PermError::Repeated(cycle[k].to_string()));
                }
                seen[c as usize] = true;
                images[c as usize] = codes[(k + 1) % codes.len()];
            }
        }
        Ok(Perm::raw(points, carrier, images))
    }

    /// Parses cycle notation such as `(1 -3)(2 4)`; `()` is the identity.
    pub fn parse(points: u32, carrier: Carrier, text: &str) -> Result<Self, PermError> {
        Perm::from_cycles(points, carrier, &parse_cycles(text)?)
    }

    /// The reversal involution `z ↦ z̄` on the barred carrier.
    pub fn bar_map(points: u32) -> Self {
        let n = points;
        Perm::raw(points, Carrier::Barred, (0..2 * n).map(|c| (c + n) % (2 * n)).collect())
    }

    pub fn points(&self) -> u32 {
        self.points
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply_code(&self, code: u32) -> u32 {
        self.images[code as usize]
    }

    pub fn apply(&self, l: Label) -> Result<Label, PermError> {
        let c = encode(self.points, self.carrier, l)?;
        Ok(decode(self.points, self.images[c as usize]))
    }

    pub fn encode(&self, l: Label) -> Result<u32, PermError> {
        encode(self.points, self.carrier, l)
    }

    pub fn decode(&self, code: u32) -> Label {
        decode(self.points, code)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm::raw(self.points, self.carrier, inv)
    }

    /// Cycles as code lists, each starting at its smallest code, sorted by
    /// that minimum. Fixed points are included.
    pub fn cycles(&self) -> &[Vec<u32>] {
        self.cycles.get_or_init(|| {
            let mut seen = vec![false; self.images.len()];
            let mut out = Vec::new();
            for start in 0..self.images.len() {
                if seen[start] {
                    continue;
                }
                let mut cyc = Vec::new();
                let mut c = start;
                while !seen[c] {
                    seen[c] = true;
                    cyc.push(c as u32);
                    c = self.images[c] as usize;
                }
                out.push(cyc);
            }
            out
        })
    }

    pub fn label_cycles(&self) -> Vec<Vec<Label>> {
        self.cycles()
            .iter()
            .map(|c| c.iter().map(|&x| decode(self.points, x)).collect())
            .collect()
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles().len()
    }

    /// Cycle lengths including fixed points, largest first.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// Replaces every cycle `(z1 … zk)` by `(z̄k … z̄1)`.
    pub fn reversal(&self) -> Result<Perm, PermError> {
        if self.carrier != Carrier::Barred {
            return Err(PermError::NeedsBarred);
        }
        let n = self.points;
        let flip = |c: u32| (c + n) % (2 * n);
        let mut images = vec![0u32; self.images.len()];
        // reversal(p)(z̄') = z̄ whenever p(z) = z'.
        for (z, &zp) in self.images.iter().enumerate() {
            images[flip(zp) as usize] = flip(z as u32);
        }
        Ok(Perm::raw(n, Carrier::Barred, images))
    }

    /// True iff the permutation equals its reversal and no cycle is its own
    /// reversal.
    pub fn is_palindromic(&self) -> bool {
        let Ok(rev) = self.reversal() else {
            return false;
        };
        if rev != *self {
            return false;
        }
        let n = self.points;
        self.cycles().iter().all(|cyc| {
            let first_bar = (cyc[0] + n) % (2 * n);
            !cyc.contains(&first_bar)
        })
    }

    pub fn to_machine_string(&self) -> String {
        self.render(|l| l.signed().to_string())
    }

    pub fn to_human_string(&self) -> String {
        self.render(|l| l.human())
    }

    fn render(&self, show: impl Fn(Label) -> String) -> String {
        let mut s = String::new();
        for cyc in self.cycles() {
            s.push('(');
            let parts: Vec<String> = cyc.iter().map(|&c| show(decode(self.points, c))).collect();
            s.push_str(&parts.join(" "));
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }
}

/// `z ↦ p(q(z))`.
pub fn compose(p: &Perm, q: &Perm) -> Result<Perm, PermError> {
    if p.points != q.points || p.carrier != q.carrier {
        return Err(PermError::CarrierMismatch(format!(
            "{}/{:?} vs {}/{:?}",
            p.points, p.carrier, q.points, q.carrier
        )));
    }
    let images = q.images.iter().map(|&x| p.images[x as usize]).collect();
    Ok(Perm::raw(p.points, p.carrier, images))
}

/// Composes a chain right to left: `compose_all([a, b, c]) = a·b·c`.
pub fn compose_all(perms: &[&Perm]) -> Result<Perm, PermError> {
    let (first, rest) = perms.split_first().ok_or(PermError::CarrierMismatch("empty product".into()))?;
    let mut acc = (*first).clone();
    for p in rest {
        acc = compose(&acc, p)?;
    }
    Ok(acc)
}

pub fn cycle_type(p: &Perm) -> Vec<usize> {
    p.cycle_type()
}

fn carrier_len(points: u32, carrier: Carrier) -> usize {
    match carrier {
        Carrier::Barred => 2 * points as usize,
        Carrier::Reduced => points as usize,
    }
}

fn encode(points: u32, carrier: Carrier, l: Label) -> Result<u32, PermError> {
    if l.index == 0 || l.index > points {
        return Err(PermError::OutOfRange(l.signed(), points));
    }
    match (carrier, l.barred) {
        (_, false) => Ok(l.index - 1),
        (Carrier::Barred, true) => Ok(l.index - 1 + points),
        (Carrier::Reduced, true) => Err(PermError::BarredOnReduced(l.human())),
    }
}

fn decode(points: u32, code: u32) -> Label {
    if code < points {
        Label::plain(code + 1)
    } else {
        Label::bar(code - points + 1)
    }
}

/// Parses `(a b c)(d e)`; labels are signed integers, a trailing combining
/// overline (U+0305) after the digits also marks a barred label.
pub fn parse_cycles(text: &str) -> Result<Vec<Vec<Label>>, PermError> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body_start = rest
            .strip_prefix('(')
            .ok_or_else(|| PermError::Parse(format!("expected '(' in {text:?}")))?;
        let close = body_start
            .find(')')
            .ok_or_else(|| PermError::Parse(format!("unclosed cycle in {text:?}")))?;
        let body = &body_start[..close];
        let labels = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(parse_label)
            .collect::<Result<Vec<_>, _>>()?;
        if !labels.is_empty() {
            cycles.push(labels);
        }
        rest = body_start[close + 1..].trim_start();
    }
    Ok(cycles)
}

fn parse_label(tok: &str) -> Result<Label, PermError> {
    let overlined = tok.contains('\u{0305}');
    let digits: String = tok.chars().filter(|&c| c != '\u{0305}').collect();
    let v: i64 = digits.parse().map_err(|_| PermError::Parse(format!("bad label {tok:?}")))?;
    let l = Label::from_signed(v)?;
    Ok(if overlined { l.flip() } else { l })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(n: u32, s: &str) -> Perm {
        Perm::parse(n, Carrier::Barred, s).unwrap()
    }

    fn rp(n: u32, s: &str) -> Perm {
        Perm::parse(n, Carrier::Reduced, s).unwrap()
    }

    #[test]
    fn compose_identity_and_involution() {
        let p = bp(3, "(1 -2 3)(2 -1 -3)");
        assert_eq!(compose(&Perm::identity(3, Carrier::Barred), &p).unwrap(), p);
        let t = bp(2, "(1 2)");
        assert!(compose(&t, &t).unwrap().is_identity());
    }

    #[test]
    fn compose_is_right_to_left() {
        let a = rp(4, "(1 4)");
        let b = rp(4, "(1 2 3)");
        let c = rp(4, "(2 4 3)");
        assert_eq!(compose(&a, &b).unwrap(), rp(4, "(1 2 3 4)"));
        assert_eq!(compose_all(&[&a, &b, &c]).unwrap(), rp(4, "(1 2)"));
        assert_eq!(compose(&b, &c).unwrap().cycle_type(), vec![3, 1]);
        assert_eq!(compose(&b, &c).unwrap(), rp(4, "(1 2 4)(3)"));
    }

    #[test]
    fn carrier_mismatch() {
        assert!(matches!(
            compose(&rp(3, "(1 2)"), &rp(4, "(1 2)")),
            Err(PermError::CarrierMismatch(_))
        ));
        assert!(compose(&rp(2, "(1 2)"), &bp(2, "(1 2)")).is_err());
    }

    #[test]
    fn reversal_examples() {
        assert_eq!(bp(3, "(1 2 3)").reversal().unwrap(), bp(3, "(-3 -2 -1)"));
        assert!(Perm::identity(3, Carrier::Barred).reversal().unwrap().is_identity());
        assert_eq!(bp(3, "(-3 1 3)").reversal().unwrap(), bp(3, "(-3 -1 3)"));
    }

    #[test]
    fn palindromic_examples() {
        assert!(bp(3, "(1 2 3)(-3 -2 -1)").is_palindromic());
        assert!(bp(2, "(1 2)(-2 -1)").is_palindromic());
        assert!(bp(2, "(1 -2)(2 -1)").is_palindromic());
        assert!(!bp(3, "(1 2 3)").is_palindromic());
        // (1 1̄) is its own reversal.
        assert!(!bp(1, "(1 -1)").is_palindromic());
    }

    #[test]
    fn cycle_types() {
        assert_eq!(Perm::identity(3, Carrier::Reduced).cycle_type(), vec![1, 1, 1]);
        assert_eq!(rp(3, "(1 2)(3)").cycle_type(), vec![2, 1]);
    }

    #[test]
    fn text_round_trip() {
        let p = bp(4, "(1 -3)(2 4)(3 -1)(-4 -2)");
        assert_eq!(p.to_machine_string(), "(1 -3)(2 4)(3 -1)(-2 -4)");
        assert_eq!(bp(4, &p.to_machine_string()), p);
        assert_eq!(bp(4, &p.to_human_string()), p);
        assert_eq!(Label::bar(3).human(), "3\u{0305}");
    }

    #[test]
    fn parse_errors() {
        assert!(Perm::parse(3, Carrier::Barred, "(1 2)(2 3)").is_err());
        assert!(Perm::parse(3, Carrier::Barred, "(1 4)").is_err());
        assert!(Perm::parse(3, Carrier::Reduced, "(1 -2)").is_err());
        assert!(Perm::parse(3, Carrier::Barred, "(1 2").is_err());
        assert!(Perm::parse(3, Carrier::Barred, "1 2").is_err());
    }
}
