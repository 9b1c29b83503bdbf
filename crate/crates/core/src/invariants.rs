//! Decomposition invariants: the rank decomposition over a field and its
//! image in `N_0 x N_0`, the domain/codomain and uniserial class relations,
//! permutation matching of direct-sum decompositions, and equivalence of
//! diagonal matrices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{inverse, rank, smith_normal_form};
use crate::matrix::ExactMatrix;
use crate::morph::{direct_sum, hom_space, search, DecisionPolicy, MorphMap, MorphObject, SearchOutcome, Verdict};
use crate::ring::{Ring, Scalar};

/// Counts of the indecomposables `k -> 0`, `0 -> k` and `1: k -> k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldDecomposition {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl FieldDecomposition {
    /// The direct sum of the indecomposables with these multiplicities.
    pub fn reassemble(&self, ring: &Ring) -> MorphObject {
        let mut parts = Vec::with_capacity(self.a + self.b + self.c);
        parts.extend((0..self.a).map(|_| MorphObject::free_i64(ring, 0, 1, &[])));
        parts.extend((0..self.b).map(|_| MorphObject::free_i64(ring, 1, 0, &[])));
        parts.extend((0..self.c).map(|_| MorphObject::free_i64(ring, 1, 1, &[1])));
        direct_sum(&parts, ring).object
    }

    pub fn psi(&self) -> (usize, usize) {
        psi((self.a, self.b, self.c))
    }

    pub fn to_json(&self) -> Value {
        json!({"a": self.a, "b": self.b, "c": self.c})
    }
}

pub fn decompose_field(m: &MorphObject) -> Result<FieldDecomposition> {
    if !m.ring().is_field() {
        return Err(Error::NonFieldRing(m.ring().to_string()));
    }
    let n = m.normalized().object;
    let (d0, d1) = (n.m0.ngens(), n.m1.ngens());
    let r = rank(&n.mu)?;
    Ok(FieldDecomposition { a: d0 - r, b: d1 - r, c: r })
}

/// `(a, b, c) -> (a + c, b + c)`.
pub fn psi(t: (usize, usize, usize)) -> (usize, usize) {
    (t.0 + t.2, t.1 + t.2)
}

/// Image of the order-unit `(m - n, n)` of the `(b, c)`-submonoid attached to an
/// injective, non-surjective map `k^n -> k^m`.
pub fn order_unit_image(n: usize, m: usize) -> Option<(usize, usize)> {
    (n < m).then(|| psi((0, m - n, n)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassTag {
    /// Domain class: 0-components isomorphisms.
    D,
    /// Codomain class: 1-components isomorphisms.
    C,
    /// 0-components injective.
    M0,
    /// 1-components injective.
    M1,
    /// 0-components surjective.
    E0,
    /// 1-components surjective.
    E1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Condition {
    Iso,
    Injective,
    Surjective,
}

impl ClassTag {
    pub const PAIR: [ClassTag; 2] = [ClassTag::D, ClassTag::C];
    pub const UNISERIAL: [ClassTag; 4] = [ClassTag::M0, ClassTag::M1, ClassTag::E0, ClassTag::E1];

    pub fn name(self) -> &'static str {
        match self {
            ClassTag::D => "d",
            ClassTag::C => "c",
            ClassTag::M0 => "0m",
            ClassTag::M1 => "1m",
            ClassTag::E0 => "0e",
            ClassTag::E1 => "1e",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "d" => ClassTag::D,
            "c" => ClassTag::C,
            "0m" | "0,m" => ClassTag::M0,
            "1m" | "1,m" => ClassTag::M1,
            "0e" | "0,e" => ClassTag::E0,
            "1e" | "1,e" => ClassTag::E1,
            _ => return Err(Error::Parse(format!("unknown class tag {s:?}"))),
        })
    }

    pub fn component(self) -> usize {
        match self {
            ClassTag::D | ClassTag::M0 | ClassTag::E0 => 0,
            _ => 1,
        }
    }

    fn condition(self) -> Condition {
        match self {
            ClassTag::D | ClassTag::C => Condition::Iso,
            ClassTag::M0 | ClassTag::M1 => Condition::Injective,
            ClassTag::E0 | ClassTag::E1 => Condition::Surjective,
        }
    }

    /// Whether `u: m -> n` satisfies the defining component condition.
    pub fn witnesses(self, u: &MorphMap, m: &MorphObject, n: &MorphObject) -> bool {
        let h = u.hom(self.component(), m, n);
        match self.condition() {
            Condition::Iso => h.is_isomorphism(),
            Condition::Injective => h.is_injective(),
            Condition::Surjective => h.is_surjective(),
        }
    }

    /// Checks the hypotheses under which the relation is used.
    pub fn check(self, m: &MorphObject) -> Result<()> {
        let failed = match self.condition() {
            Condition::Iso => {
                let i = self.component();
                (!m.component(i).has_local_endomorphisms()).then(|| format!("End(M{i}) not local"))
            }
            _ => (0..2).find(|&i| !m.component(i).has_local_endomorphisms()).map(|i| format!("M{i} not uniserial")),
        };
        failed.map_or(Ok(()), |msg| Err(Error::PreconditionViolated(msg)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassVerdict {
    Equal,
    NotEqual,
    Undecided,
}

impl ClassVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassVerdict::Equal => "equal",
            ClassVerdict::NotEqual => "not-equal",
            ClassVerdict::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassReport {
    pub tag: ClassTag,
    pub verdict: ClassVerdict,
    pub forward: Option<MorphMap>,
    pub backward: Option<MorphMap>,
}

impl ClassReport {
    pub fn to_json(&self) -> Value {
        json!({
            "tag": self.tag.name(),
            "verdict": self.verdict.as_str(),
            "forward": self.forward.as_ref().map(MorphMap::to_json),
            "backward": self.backward.as_ref().map(MorphMap::to_json),
        })
    }
}

/// Searches `Hom(m, n)` and `Hom(n, m)` for witnesses of `[m]_tag = [n]_tag`.
pub fn class_equal(m: &MorphObject, n: &MorphObject, tag: ClassTag, policy: &DecisionPolicy) -> Result<ClassReport> {
    if m.ring() != n.ring() {
        return Err(Error::PreconditionViolated("objects over different rings".into()));
    }
    tag.check(m)?;
    tag.check(n)?;
    let one_way = |src: &MorphObject, tgt: &MorphObject| {
        search(&hom_space(src, tgt), policy, |u| tag.witnesses(u, src, tgt))
    };
    let forward = one_way(m, n);
    let backward = one_way(n, m);
    let verdict = match (&forward, &backward) {
        (SearchOutcome::Found(_), SearchOutcome::Found(_)) => ClassVerdict::Equal,
        (SearchOutcome::Exhausted { .. }, _) | (_, SearchOutcome::Exhausted { .. }) => ClassVerdict::NotEqual,
        _ => ClassVerdict::Undecided,
    };
    let found = |o: SearchOutcome| match o {
        SearchOutcome::Found(u) => Some(u),
        _ => None,
    };
    Ok(ClassReport { tag, verdict, forward: found(forward), backward: found(backward) })
}

/// Lexicographically least perfect matching of a square 0/1 matrix, as
/// `perm[k] = column matched to row k`.
pub fn lex_perfect_matching(allowed: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = allowed.len();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for k in 0..n {
        let choice = (0..n).find(|&l| {
            if used[l] || !allowed[k][l] {
                return false;
            }
            used[l] = true;
            let ok = has_perfect_matching(allowed, k + 1, &used);
            used[l] = false;
            ok
        })?;
        used[choice] = true;
        perm.push(choice);
    }
    Some(perm)
}

/// Kuhn's augmenting paths on rows `from..n` against the unused columns.
fn has_perfect_matching(allowed: &[Vec<bool>], from: usize, used: &[bool]) -> bool {
    let n = allowed.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(k: usize, allowed: &[Vec<bool>], used: &[bool], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for l in 0..allowed.len() {
            if used[l] || !allowed[k][l] || seen[l] {
                continue;
            }
            seen[l] = true;
            if owner[l].map_or(true, |o| augment(o, allowed, used, seen, owner)) {
                owner[l] = Some(k);
                return true;
            }
        }
        false
    }
    (from..n).all(|k| augment(k, allowed, used, &mut vec![false; n], &mut owner))
}

#[derive(Clone, Debug)]
pub struct MatchReport {
    pub verdict: Verdict,
    pub permutations: BTreeMap<String, Vec<usize>>,
    pub class_matrix: BTreeMap<String, Vec<Vec<ClassVerdict>>>,
}

impl MatchReport {
    pub fn to_json(&self) -> Value {
        let matrix: BTreeMap<&String, Vec<Vec<&str>>> = self
            .class_matrix
            .iter()
            .map(|(k, rows)| (k, rows.iter().map(|r| r.iter().map(|v| v.as_str()).collect()).collect()))
            .collect();
        json!({
            "verdict": self.verdict.as_str(),
            "permutations": self.permutations,
            "class_matrix": matrix,
        })
    }
}

/// Decides `⊕ ms ≅ ⊕ ns` by independent perfect matchings of the class
/// relations in `tags` (the pair `d, c`, or the four uniserial relations).
pub fn match_decompositions(
    ms: &[MorphObject],
    ns: &[MorphObject],
    tags: &[ClassTag],
    policy: &DecisionPolicy,
) -> Result<MatchReport> {
    for o in ms.iter().chain(ns) {
        for t in tags {
            t.check(o)?;
        }
    }
    let mut report = MatchReport { verdict: Verdict::Not, permutations: BTreeMap::new(), class_matrix: BTreeMap::new() };
    if ms.len() != ns.len() {
        return Ok(report);
    }
    let mut undecided = false;
    for &tag in tags {
        let mut matrix = Vec::with_capacity(ms.len());
        for m in ms {
            let row = ns.iter().map(|n| class_equal(m, n, tag, policy).map(|r| r.verdict)).collect::<Result<Vec<_>>>()?;
            matrix.push(row);
        }
        let sure: Vec<Vec<bool>> = matrix.iter().map(|r| r.iter().map(|v| *v == ClassVerdict::Equal).collect()).collect();
        let maybe: Vec<Vec<bool>> = matrix.iter().map(|r| r.iter().map(|v| *v != ClassVerdict::NotEqual).collect()).collect();
        let name = tag.name().to_string();
        report.class_matrix.insert(name.clone(), matrix);
        if let Some(p) = lex_perfect_matching(&sure) {
            report.permutations.insert(name, p);
        } else if lex_perfect_matching(&maybe).is_some() {
            undecided = true;
        } else {
            report.permutations.clear();
            return Ok(report);
        }
    }
    report.verdict = if undecided { Verdict::Undecided } else { Verdict::Isomorphic };
    if undecided {
        report.permutations.clear();
    }
    Ok(report)
}

/// `B = Q^{-1} A P` for diagonal `A`, `B`.
#[derive(Clone, Debug)]
pub struct DiagReport {
    pub equivalent: bool,
    pub divisors_a: Vec<BigInt>,
    pub divisors_b: Vec<BigInt>,
    pub p: Option<ExactMatrix>,
    pub q: Option<ExactMatrix>,
}

impl DiagReport {
    pub fn to_json(&self) -> Value {
        let strs = |v: &[BigInt]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>();
        json!({
            "equivalent": self.equivalent,
            "divisors_a": strs(&self.divisors_a),
            "divisors_b": strs(&self.divisors_b),
            "P": self.p.as_ref().map(ExactMatrix::to_json),
            "Q": self.q.as_ref().map(ExactMatrix::to_json),
        })
    }
}

pub fn diag_matrix(ring: &Ring, entries: &[Scalar]) -> ExactMatrix {
    let n = entries.len();
    let mut m = ExactMatrix::zeros(ring, n, n);
    for (i, x) in entries.iter().enumerate() {
        m.set(i, i, x.clone());
    }
    m
}

/// Equivalence of `diag(as)` and `diag(bs)` via elementary divisors, with a
/// certificate `(P, Q)` from the two Smith forms.
pub fn diag_equiv(ring: &Ring, as_: &[Scalar], bs: &[Scalar]) -> Result<DiagReport> {
    if matches!(ring, Ring::Rational) {
        return Err(Error::UnsupportedRing(format!("diagonal equivalence needs a local residue ring or Z, got {ring}")));
    }
    if as_.len() != bs.len() {
        return Err(Error::Dimension(format!("{} entries against {}", as_.len(), bs.len())));
    }
    let (a, b) = (diag_matrix(ring, as_), diag_matrix(ring, bs));
    let (sa, sb) = (smith_normal_form(&a), smith_normal_form(&b));
    let equivalent = sa.d == sb.d;
    let (p, q) = if equivalent {
        // U_A A V_A = U_B B V_B, so B = (U_B^{-1} U_A) A (V_A V_B^{-1}).
        let inv = |m: &ExactMatrix| inverse(m).map(|o| o.expect("Smith transforms are invertible"));
        let q = inv(&sa.u)?.mul(&sb.u);
        let p = sa.v.mul(&inv(&sb.v)?);
        debug_assert_eq!(inv(&q)?.mul(&a).mul(&p), b);
        (Some(p), Some(q))
    } else {
        (None, None)
    };
    Ok(DiagReport { equivalent, divisors_a: sa.elementary_divisors, divisors_b: sb.elementary_divisors, p, q })
}
