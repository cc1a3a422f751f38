//! Knowledge base AST for temporal DL-Lite with geometric diamonds.

mod normalize;
mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

pub use normalize::normalize_kb;
pub use parse::{parse_kb, ParseError, ParseErrorKind};
pub use print::serialize_kb;

/// Source location (1-based). Locations never take part in equality.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}
impl Eq for Span {}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rigidity {
    Rigid,
    Flexible,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Role {
    pub name: String,
    pub inverted: bool,
}

impl Role {
    pub fn new(name: impl Into<String>) -> Role {
        Role { name: name.into(), inverted: false }
    }

    pub fn inverse(&self) -> Role {
        Role { name: self.name.clone(), inverted: !self.inverted }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted {
            write!(f, "inv({})", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasicConcept {
    Bottom,
    Atomic(String),
    Exists(Role),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Concept {
    Basic(BasicConcept),
    Not(Box<Concept>),
    Next(Box<Concept>),
    Eventually(Box<Concept>),
    Always(Box<Concept>),
    Until(Box<Concept>, Box<Concept>),
    And(Box<Concept>, Box<Concept>),
}

impl Concept {
    pub fn atomic(name: impl Into<String>) -> Concept {
        Concept::Basic(BasicConcept::Atomic(name.into()))
    }
    pub fn bottom() -> Concept {
        Concept::Basic(BasicConcept::Bottom)
    }
    pub fn exists(role: Role) -> Concept {
        Concept::Basic(BasicConcept::Exists(role))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Concept {
        Concept::Not(Box::new(c))
    }
    pub fn next_n(c: Concept, n: u32) -> Concept {
        (0..n).fold(c, |c, _| Concept::Next(Box::new(c)))
    }
    pub fn and(a: Concept, b: Concept) -> Concept {
        Concept::And(Box::new(a), Box::new(b))
    }
    pub fn until(a: Concept, b: Concept) -> Concept {
        Concept::Until(Box::new(a), Box::new(b))
    }

    /// Temporal nesting depth.
    pub fn depth(&self) -> usize {
        match self {
            Concept::Basic(_) => 0,
            Concept::Not(c) => c.depth(),
            Concept::And(a, b) => a.depth().max(b.depth()),
            Concept::Next(c) | Concept::Eventually(c) | Concept::Always(c) => 1 + c.depth(),
            Concept::Until(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub(crate) fn visit_basic<'a>(&'a self, f: &mut impl FnMut(&'a BasicConcept)) {
        match self {
            Concept::Basic(b) => f(b),
            Concept::Not(c) | Concept::Next(c) | Concept::Eventually(c) | Concept::Always(c) => {
                c.visit_basic(f)
            }
            Concept::Until(a, b) | Concept::And(a, b) => {
                a.visit_basic(f);
                b.visit_basic(f);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConceptInclusion {
    pub lhs: Concept,
    pub rhs: Concept,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoleInclusion {
    pub lhs: Role,
    pub rhs: Role,
    pub span: Span,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ontology {
    pub concept_inclusions: Vec<ConceptInclusion>,
    pub role_inclusions: Vec<RoleInclusion>,
}

/// Exact parameter of a geometric distribution, ½ ≤ p < 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeomParam(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parameter {0} outside [1/2,1)")]
pub struct ParamOutOfRange(pub String);

impl GeomParam {
    pub fn new(p: BigRational) -> Result<GeomParam, ParamOutOfRange> {
        let half = BigRational::new(1.into(), 2.into());
        if p < half || p >= BigRational::one() {
            return Err(ParamOutOfRange(p.to_string()));
        }
        Ok(GeomParam(p))
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<GeomParam, ParamOutOfRange> {
        if den == 0 {
            return Err(ParamOutOfRange(format!("{num}/{den}")));
        }
        GeomParam::new(BigRational::new(num.into(), den.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_half(&self) -> bool {
        self.0 == BigRational::new(1.into(), 2.into())
    }
}

impl fmt::Display for GeomParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
    Diamond(GeomParam),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    Concept(String),
    Role(Role),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AboxAtom {
    pub offset: u32,
    pub polarity: Polarity,
    pub predicate: Predicate,
    pub args: Vec<String>,
    pub span: Span,
}

impl AboxAtom {
    pub fn concept(offset: u32, polarity: Polarity, name: &str, a: &str) -> AboxAtom {
        AboxAtom {
            offset,
            polarity,
            predicate: Predicate::Concept(name.to_string()),
            args: vec![a.to_string()],
            span: Span::default(),
        }
    }

    pub fn role(offset: u32, polarity: Polarity, role: Role, a: &str, b: &str) -> AboxAtom {
        AboxAtom {
            offset,
            polarity,
            predicate: Predicate::Role(role),
            args: vec![a.to_string(), b.to_string()],
            span: Span::default(),
        }
    }

    pub fn is_diamond(&self) -> bool {
        matches!(self.polarity, Polarity::Diamond(_))
    }

    /// Same fact with a different offset and polarity.
    pub fn with(&self, offset: u32, polarity: Polarity) -> AboxAtom {
        AboxAtom { offset, polarity, ..self.clone() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    /// Every role name with its rigidity, declared or defaulted to flexible.
    pub roles: BTreeMap<String, Rigidity>,
    pub ontology: Ontology,
    pub abox: Vec<AboxAtom>,
}

impl KnowledgeBase {
    pub fn diamonds(&self) -> Vec<&AboxAtom> {
        self.abox.iter().filter(|a| a.is_diamond()).collect()
    }

    pub fn diamond_count(&self) -> usize {
        self.abox.iter().filter(|a| a.is_diamond()).count()
    }

    pub fn param(&self) -> Option<&GeomParam> {
        self.abox.iter().find_map(|a| match &a.polarity {
            Polarity::Diamond(p) => Some(p),
            _ => None,
        })
    }

    pub fn individuals(&self) -> BTreeSet<String> {
        self.abox.iter().flat_map(|a| a.args.iter().cloned()).collect()
    }

    pub fn rigidity(&self, name: &str) -> Rigidity {
        self.roles.get(name).copied().unwrap_or(Rigidity::Flexible)
    }

    /// Role names occurring anywhere in the KB, together with their inverses.
    pub fn role_set(&self) -> BTreeSet<Role> {
        let mut names: BTreeSet<String> = self.roles.keys().cloned().collect();
        for ci in &self.ontology.concept_inclusions {
            for c in [&ci.lhs, &ci.rhs] {
                c.visit_basic(&mut |b| {
                    if let BasicConcept::Exists(r) = b {
                        names.insert(r.name.clone());
                    }
                });
            }
        }
        for ri in &self.ontology.role_inclusions {
            names.insert(ri.lhs.name.clone());
            names.insert(ri.rhs.name.clone());
        }
        for a in &self.abox {
            if let Predicate::Role(r) = &a.predicate {
                names.insert(r.name.clone());
            }
        }
        names
            .into_iter()
            .flat_map(|n| [Role::new(n.clone()), Role { name: n, inverted: true }])
            .collect()
    }

    pub fn concept_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for ci in &self.ontology.concept_inclusions {
            for c in [&ci.lhs, &ci.rhs] {
                c.visit_basic(&mut |b| {
                    if let BasicConcept::Atomic(n) = b {
                        out.insert(n.clone());
                    }
                });
            }
        }
        for a in &self.abox {
            if let Predicate::Concept(n) = &a.predicate {
                out.insert(n.clone());
            }
        }
        out
    }
}
