//! Loop-free quivers, their doubles, dimension vectors and words.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver without loops. Vertex order is fixed at construction and
/// determines word order and fingerprint coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

/// On-disk form of a quiver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverFile {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowEntry {
    pub id: String,
    pub from: String,
    pub to: String,
}

impl Quiver {
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::DuplicateId(v.clone()));
            }
        }
        let index = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnknownVertex(name.to_string()))
        };
        let mut ids = HashSet::new();
        let mut out = Vec::with_capacity(arrows.len());
        for (id, from, to) in arrows {
            let id = id.as_ref().to_string();
            if !ids.insert(id.clone()) || seen.contains(&id) {
                return Err(Error::DuplicateId(id));
            }
            let source = index(from.as_ref())?;
            let target = index(to.as_ref())?;
            if source == target {
                return Err(Error::LoopDetected(id));
            }
            out.push(Arrow { id, source, target });
        }
        Ok(Quiver { vertices, arrows: out })
    }

    pub fn from_file(file: &QuiverFile) -> Result<Self> {
        let arrows: Vec<(String, String, String)> = file
            .arrows
            .iter()
            .map(|a| (a.id.clone(), a.from.clone(), a.to.clone()))
            .collect();
        Self::new(&file.vertices, &arrows)
    }

    pub fn to_file(&self) -> QuiverFile {
        QuiverFile {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowEntry {
                    id: a.id.clone(),
                    from: self.vertices[a.source].clone(),
                    to: self.vertices[a.target].clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: QuiverFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("quiver serializes")
    }

    /// Linearly oriented `A_n`: `1 -> 2 -> ... -> n`.
    pub fn a_n(n: usize) -> Self {
        let vs: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let arrows: Vec<(String, String, String)> = (1..n)
            .map(|i| (format!("a{i}"), i.to_string(), (i + 1).to_string()))
            .collect();
        Self::new(&vs, &arrows).expect("A_n is well formed")
    }

    /// `D_4` with arrows `a: 1->4`, `b: 2->4`, `c: 3->4`.
    pub fn d4() -> Self {
        Self::new(
            &["1", "2", "3", "4"],
            &[("a", "1", "4"), ("b", "2", "4"), ("c", "3", "4")],
        )
        .expect("D4 is well formed")
    }

    /// Two parallel arrows `1 -> 2`.
    pub fn kronecker() -> Self {
        Self::new(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).expect("Kronecker is well formed")
    }

    /// Named built-in quivers: `A<n>`, `D4`, `Kronecker`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "D4" => Some(Self::d4()),
            "Kronecker" => Some(Self::kronecker()),
            _ => {
                let n: usize = name.strip_prefix('A')?.parse().ok()?;
                (n >= 1).then(|| Self::a_n(n))
            }
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// `(d, e)_Q = 2 sum d_i e_i - sum_a (d_s(a) e_e(a) + d_e(a) e_s(a))`.
    pub fn symmetric_form(&self, d: &DimVector, e: &DimVector) -> i64 {
        let diag: i64 = d.0.iter().zip(&e.0).map(|(a, b)| 2 * (*a as i64) * (*b as i64)).sum();
        let cross: i64 = self
            .arrows
            .iter()
            .map(|a| {
                (d.0[a.source] * e.0[a.target] + d.0[a.target] * e.0[a.source]) as i64
            })
            .sum();
        diag - cross
    }

    /// Whether every connected component is a simply-laced Dynkin diagram.
    pub fn is_dynkin(&self) -> bool {
        let n = self.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for a in &self.arrows {
            adj[a.source].push(a.target);
            adj[a.target].push(a.source);
        }
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                for &w in &adj[comp[k]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                k += 1;
            }
            let edges: usize = comp.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
            if edges + 1 != comp.len() {
                return false;
            }
            let branch: Vec<usize> = comp.iter().copied().filter(|&v| adj[v].len() >= 3).collect();
            match branch.as_slice() {
                [] => {}
                [b] => {
                    if adj[*b].len() > 3 {
                        return false;
                    }
                    // arm lengths, counting vertices beyond the branch point
                    let mut arms: Vec<usize> = adj[*b]
                        .iter()
                        .map(|&first| {
                            let (mut prev, mut cur, mut len) = (*b, first, 1);
                            loop {
                                let next: Vec<usize> =
                                    adj[cur].iter().copied().filter(|&w| w != prev).collect();
                                match next.as_slice() {
                                    [w] => {
                                        prev = cur;
                                        cur = *w;
                                        len += 1;
                                    }
                                    _ => break len,
                                }
                            }
                        })
                        .collect();
                    arms.sort_unstable();
                    let (p, q, r) = (arms[0] + 1, arms[1] + 1, arms[2] + 1);
                    // 1/p + 1/q + 1/r > 1
                    if q * r + p * r + p * q <= p * q * r {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        true
    }
}

/// A doubled arrow of `Q̄`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DoubleArrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
    /// 0 for arrows of `Q`, 1 for barred arrows.
    pub sign: u8,
    /// Index of the partner arrow under the bar involution.
    pub bar: usize,
}

/// The double quiver. Arrows `0..n` are those of `Q`, arrow `n + k` is the
/// reverse of arrow `k` and is named `<id>*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DoubleQuiver {
    base: Quiver,
    arrows: Vec<DoubleArrow>,
}

pub fn build_double(q: &Quiver) -> Result<DoubleQuiver> {
    let n = q.arrows.len();
    let mut arrows = Vec::with_capacity(2 * n);
    for (k, a) in q.arrows.iter().enumerate() {
        if a.source == a.target {
            return Err(Error::LoopDetected(a.id.clone()));
        }
        arrows.push(DoubleArrow { id: a.id.clone(), source: a.source, target: a.target, sign: 0, bar: n + k });
    }
    for (k, a) in q.arrows.iter().enumerate() {
        arrows.push(DoubleArrow {
            id: format!("{}*", a.id),
            source: a.target,
            target: a.source,
            sign: 1,
            bar: k,
        });
    }
    Ok(DoubleQuiver { base: q.clone(), arrows })
}

impl DoubleQuiver {
    pub fn base(&self) -> &Quiver {
        &self.base
    }

    pub fn arrows(&self) -> &[DoubleArrow] {
        &self.arrows
    }

    pub fn arrow(&self, k: usize) -> &DoubleArrow {
        &self.arrows[k]
    }

    pub fn vertex_count(&self) -> usize {
        self.base.vertex_count()
    }

    pub fn arrow_index(&self, id: &str) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.id == id)
            .ok_or_else(|| Error::UnknownArrow(id.to_string()))
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.base.vertices[i]
    }
}

/// Per-vertex nonnegative dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DimVector(pub Vec<usize>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DimVector(v)
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `sum_i C(d_i, 2)`, the dimension of the complete graded flag variety.
    pub fn flag_variety_dim(&self) -> usize {
        self.0.iter().map(|&d| d * d.saturating_sub(1) / 2).sum()
    }
}

impl std::ops::Index<usize> for DimVector {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

/// A sequence of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn content(&self, vertex_count: usize) -> DimVector {
        let mut d = vec![0; vertex_count];
        for &i in &self.0 {
            d[i] += 1;
        }
        DimVector(d)
    }

    /// Content of the word weighted by a 0/1 coefficient sequence.
    pub fn weighted_content(&self, coeffs: &[bool], vertex_count: usize) -> DimVector {
        let mut d = vec![0; vertex_count];
        for (&i, &c) in self.0.iter().zip(coeffs) {
            if c {
                d[i] += 1;
            }
        }
        DimVector(d)
    }

    /// The subword of letters with coefficient 1.
    pub fn subword(&self, coeffs: &[bool]) -> Word {
        Word(self.0.iter().zip(coeffs).filter(|(_, &c)| c).map(|(&i, _)| i).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn display(&self, q: &Quiver) -> String {
        let names: Vec<&str> = self.0.iter().map(|&i| q.vertices()[i].as_str()).collect();
        format!("({})", names.join(","))
    }

    pub fn parse(s: &str, q: &Quiver) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(Word(Vec::new()));
        }
        s.split(',').map(|t| q.vertex_index(t.trim())).collect::<Result<_>>().map(Word)
    }
}

/// All words of content `d`, lexicographic in the vertex order.
pub fn enumerate_words(d: &DimVector) -> Vec<Word> {
    let mut letters: Vec<usize> = d.0.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k)).collect();
    let mut out = vec![Word(letters.clone())];
    while next_permutation(&mut letters) {
        out.push(Word(letters.clone()));
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// A pair of complementary 0/1 coefficient sequences `(c', c'')`.
pub type Splitting = (Vec<bool>, Vec<bool>);

/// All `(c', c'')` with `c' + c'' = 1` whose weighted contents are `d1` and `d2`.
pub fn enumerate_splittings(word: &Word, d1: &DimVector, d2: &DimVector) -> Vec<Splitting> {
    let n = d1.len();
    if d2.len() != n || word.content(n) != d1.add(d2) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut remaining = d1.0.clone();
    let mut cur = Vec::with_capacity(word.len());
    fn go(word: &[usize], k: usize, remaining: &mut [usize], cur: &mut Vec<bool>, out: &mut Vec<Splitting>) {
        if k == word.len() {
            if remaining.iter().all(|&r| r == 0) {
                let other = cur.iter().map(|c| !c).collect();
                out.push((cur.clone(), other));
            }
            return;
        }
        let i = word[k];
        if remaining[i] > 0 {
            remaining[i] -= 1;
            cur.push(true);
            go(word, k + 1, remaining, cur, out);
            cur.pop();
            remaining[i] += 1;
        }
        cur.push(false);
        go(word, k + 1, remaining, cur, out);
        cur.pop();
    }
    go(&word.0, 0, &mut remaining, &mut cur, &mut out);
    out
}

pub fn multinomial(d: &DimVector) -> u128 {
    let mut acc: u128 = 1;
    let mut total: u128 = 0;
    for &k in &d.0 {
        for j in 1..=k as u128 {
            total += 1;
            acc = acc * total / j;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn a2_double() {
        let dq = build_double(&Quiver::a_n(2)).unwrap();
        assert_eq!(dq.arrows().len(), 2);
        let a = dq.arrow(0);
        assert_eq!((a.source, a.target, a.sign), (0, 1, 0));
        let abar = dq.arrow(1);
        assert_eq!((abar.id.as_str(), abar.source, abar.target, abar.sign), ("a1*", 1, 0, 1));
    }

    #[test]
    fn d4_double() {
        let dq = build_double(&Quiver::d4()).unwrap();
        assert_eq!(dq.arrows().len(), 6);
        for k in 3..6 {
            assert_eq!(dq.arrow(k).source, 3);
            assert_eq!(dq.arrow(k).sign, 1);
        }
        for (k, b) in dq.arrows().iter().enumerate() {
            assert_eq!(dq.arrow(b.bar).bar, k);
            assert_eq!(b.sign + dq.arrow(b.bar).sign, 1);
        }
    }

    #[test]
    fn loops_rejected() {
        let err = Quiver::new(&["1"], &[("l", "1", "1")]).unwrap_err();
        assert_eq!(err, Error::LoopDetected("l".into()));
    }

    #[test]
    fn duplicate_ids_rejected() {
        assert!(Quiver::new(&["1", "1"], &[]).is_err());
        assert!(Quiver::new(&["1", "2"], &[("a", "1", "2"), ("a", "2", "1")]).is_err());
        assert!(Quiver::new(&["1", "2"], &[("a", "1", "3")]).is_err());
    }

    #[test]
    fn symmetric_form_examples() {
        let a2 = Quiver::a_n(2);
        let e1 = DimVector::unit(2, 0);
        let e2 = DimVector::unit(2, 1);
        assert_eq!(a2.symmetric_form(&e1, &e1), 2);
        assert_eq!(a2.symmetric_form(&e1, &e2), -1);
        assert_eq!(Quiver::kronecker().symmetric_form(&e1, &e2), -2);
    }

    #[test]
    fn word_enumeration() {
        let w = enumerate_words(&DimVector(vec![1, 1]));
        assert_eq!(w, vec![Word(vec![0, 1]), Word(vec![1, 0])]);
        assert_eq!(enumerate_words(&DimVector(vec![1, 1, 1, 2])).len(), 60);
        assert_eq!(enumerate_words(&DimVector(vec![0, 0])), vec![Word(vec![])]);
    }

    #[test]
    fn splitting_examples() {
        let s = enumerate_splittings(&Word(vec![0, 1]), &DimVector(vec![1, 0]), &DimVector(vec![0, 1]));
        assert_eq!(s, vec![(vec![true, false], vec![false, true])]);
        let e4 = DimVector::unit(4, 3);
        assert_eq!(enumerate_splittings(&Word(vec![3, 3]), &e4, &e4).len(), 2);
        let e1 = DimVector::unit(4, 0);
        assert!(enumerate_splittings(&Word(vec![3, 3]), &e1, &e4).is_empty());
    }

    #[test]
    fn dynkin_detection() {
        assert!(Quiver::a_n(3).is_dynkin());
        assert!(Quiver::d4().is_dynkin());
        assert!(!Quiver::kronecker().is_dynkin());
        let d4_tilde = Quiver::new(
            &["1", "2", "3", "4", "5"],
            &[("a", "1", "5"), ("b", "2", "5"), ("c", "3", "5"), ("d", "4", "5")],
        )
        .unwrap();
        assert!(!d4_tilde.is_dynkin());
    }

    #[test]
    fn quiver_json_round_trip() {
        let q = Quiver::d4();
        assert_eq!(Quiver::from_json(&q.to_json()).unwrap(), q);
    }

    proptest! {
        #[test]
        fn word_count_is_multinomial(d in proptest::collection::vec(0usize..3, 1..4)) {
            let d = DimVector(d);
            let words = enumerate_words(&d);
            prop_assert_eq!(words.len() as u128, multinomial(&d));
            prop_assert!(words.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn symmetric_form_is_symmetric(
            d in proptest::collection::vec(0usize..5, 2),
            e in proptest::collection::vec(0usize..5, 2),
        ) {
            let q = Quiver::kronecker();
            let (d, e) = (DimVector(d), DimVector(e));
            prop_assert_eq!(q.symmetric_form(&d, &e), q.symmetric_form(&e, &d));
        }

        #[test]
        fn splittings_partition_the_word(d1 in proptest::collection::vec(0usize..3, 3), d2 in proptest::collection::vec(0usize..3, 3)) {
            let (d1, d2) = (DimVector(d1), DimVector(d2));
            for w in enumerate_words(&d1.add(&d2)).iter().take(20) {
                for (c1, c2) in enumerate_splittings(w, &d1, &d2) {
                    prop_assert!(c1.iter().zip(&c2).all(|(a, b)| a ^ b));
                    prop_assert_eq!(w.weighted_content(&c1, 3), d1.clone());
                    prop_assert_eq!(w.weighted_content(&c2, 3), d2.clone());
                }
            }
        }
    }
}
