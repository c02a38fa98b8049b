//! Verdicts with replayable certificates.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::family::ModuleFamily;
use crate::module::{hom_dim, ModuleMap, ModuleRep};
use crate::tensor::tensor_over_algebra;
use crate::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Holds,
    Fails,
    OutOfScope,
}

impl Outcome {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Outcome::Holds
        } else {
            Outcome::Fails
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
            Outcome::OutOfScope => "out-of-scope",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "holds" => Some(Outcome::Holds),
            "fails" => Some(Outcome::Fails),
            "out-of-scope" => Some(Outcome::OutOfScope),
            _ => None,
        }
    }

    /// Fails dominates, then Holds; all out of scope stays out of scope.
    pub fn combine(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
        let mut any_holds = false;
        for o in outcomes {
            match o {
                Outcome::Fails => return Outcome::Fails,
                Outcome::Holds => any_holds = true,
                Outcome::OutOfScope => {}
            }
        }
        if any_holds {
            Outcome::Holds
        } else {
            Outcome::OutOfScope
        }
    }
}

/// A statement about concrete data that can be re-checked from that data alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fact {
    HomDim {
        source: ModuleRep,
        target: ModuleRep,
        dim: usize,
    },
    NonzeroMap {
        map: ModuleMap,
    },
    Member {
        family: ModuleFamily,
        module: ModuleRep,
        member: bool,
    },
    TensorDim {
        right: ModuleRep,
        left: ModuleRep,
        dim: usize,
    },
    Isomorphic {
        a: ModuleRep,
        b: ModuleRep,
        iso: ModuleMap,
    },
}

impl Fact {
    pub fn kind(&self) -> &'static str {
        match self {
            Fact::HomDim { .. } => "hom-dim",
            Fact::NonzeroMap { .. } => "nonzero-map",
            Fact::Member { .. } => "member",
            Fact::TensorDim { .. } => "tensor-dim",
            Fact::Isomorphic { .. } => "isomorphic",
        }
    }

    pub fn replay(&self, limits: &Limits) -> Result<bool> {
        match self {
            Fact::HomDim { source, target, dim } => Ok(hom_dim(source, target)? == *dim),
            Fact::NonzeroMap { map } => Ok(map.matrix().rows() == map.target().dim()
                && map.matrix().cols() == map.source().dim()
                && map.is_intertwiner()
                && !map.matrix().is_zero()),
            Fact::Member { family, module, member } => Ok(family.contains(module, limits)? == *member),
            Fact::TensorDim { right, left, dim } => Ok(tensor_over_algebra(right, left)?.dim == *dim),
            Fact::Isomorphic { a, b, iso } => Ok(iso.source() == a
                && iso.target() == b
                && iso.matrix().rows() == b.dim()
                && iso.matrix().cols() == a.dim()
                && iso.is_intertwiner()
                && iso.is_isomorphism()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub clause: String,
    pub fact: Fact,
}

impl Certificate {
    pub fn new(clause: &str, fact: Fact) -> Self {
        Self {
            clause: String::from(clause),
            fact,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub claim: String,
    pub outcome: Outcome,
    pub detail: String,
    pub certificates: Vec<Certificate>,
    pub sub: Vec<Verdict>,
    pub universe_hash: String,
}

impl Verdict {
    pub fn new(claim: &str, outcome: Outcome, detail: String, certificates: Vec<Certificate>) -> Self {
        Self {
            claim: String::from(claim),
            outcome,
            detail,
            certificates,
            sub: Vec::new(),
            universe_hash: String::new(),
        }
    }

    /// A verdict whose outcome is the combination of its parts.
    pub fn aggregate(claim: &str, detail: String, sub: Vec<Verdict>) -> Self {
        let outcome = Outcome::combine(sub.iter().map(|v| v.outcome));
        Self {
            claim: String::from(claim),
            outcome,
            detail,
            certificates: Vec::new(),
            sub,
            universe_hash: String::new(),
        }
    }

    pub fn with_sub(mut self, sub: Vec<Verdict>) -> Self {
        self.sub = sub;
        self
    }

    pub fn with_hash(mut self, hash: &str) -> Self {
        self.universe_hash = String::from(hash);
        self
    }

    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    /// Every certificate in this verdict and its parts re-checks.
    pub fn replay(&self, limits: &Limits) -> Result<bool> {
        for c in &self.certificates {
            if !c.fact.replay(limits)? {
                return Ok(false);
            }
        }
        for v in &self.sub {
            if !v.replay(limits)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Number of certificates here and in all parts.
    pub fn certificate_count(&self) -> usize {
        self.certificates.len() + self.sub.iter().map(Verdict::certificate_count).sum::<usize>()
    }

    /// First verdict in depth-first order with the given claim id.
    pub fn find(&self, claim: &str) -> Option<&Verdict> {
        if self.claim == claim {
            return Some(self);
        }
        self.sub.iter().find_map(|v| v.find(claim))
    }
}

/// Hex SHA-256 of the canonical bytes of the modules, in order.
pub fn universe_hash<'a>(modules: impl IntoIterator<Item = &'a ModuleRep>) -> String {
    let mut h = Sha256::new();
    for m in modules {
        let bytes = m.canonical_bytes();
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(&bytes);
    }
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest.iter() {
        let _ = write!(out, "{b:02x}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::A2;
    use crate::module::hom_space;

    #[test]
    fn outcomes_combine() {
        use Outcome::*;
        assert_eq!(Outcome::combine([Holds, OutOfScope]), Holds);
        assert_eq!(Outcome::combine([Holds, Fails, OutOfScope]), Fails);
        assert_eq!(Outcome::combine([OutOfScope]), OutOfScope);
        assert_eq!(Outcome::combine([]), OutOfScope);
    }

    #[test]
    fn facts_replay() {
        let a2 = A2::new();
        let t = a2.t_modules();
        let l = Limits::default();
        assert!(Fact::HomDim {
            source: t.n.clone(),
            target: t.n.clone(),
            dim: 2
        }
        .replay(&l)
        .unwrap());
        assert!(!Fact::HomDim {
            source: t.p.clone(),
            target: t.s_s.clone(),
            dim: 1
        }
        .replay(&l)
        .unwrap());
        let f = hom_space(&t.s_s, &t.p).unwrap().pop().unwrap();
        assert!(Fact::NonzeroMap { map: f.clone() }.replay(&l).unwrap());
        assert!(!Fact::Isomorphic {
            a: t.s_s.clone(),
            b: t.p.clone(),
            iso: f
        }
        .replay(&l)
        .unwrap());
        let id = ModuleMap::identity(&t.p);
        assert!(Fact::Isomorphic {
            a: t.p.clone(),
            b: t.p.clone(),
            iso: id
        }
        .replay(&l)
        .unwrap());
    }

    #[test]
    fn hash_is_stable_and_order_sensitive() {
        let a2 = A2::new();
        let u = a2.t_universe();
        let h1 = universe_hash(&u);
        assert_eq!(h1, universe_hash(&a2.t_universe()));
        assert_eq!(h1.len(), 64);
        let rev: Vec<ModuleRep> = u.iter().rev().cloned().collect();
        assert_ne!(h1, universe_hash(&rev));
    }
}
