//! Identifiers, predications and primitive-relation triples shared by every stage.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("concept lemma must be non-empty and contain no whitespace: {0:?}")]
    BadLemma(String),
    #[error("individual name must be non-empty: {0:?}")]
    BadIndividual(String),
    #[error("predicate label must be non-empty and contain no whitespace: {0:?}")]
    BadPredicate(String),
    #[error("unknown argument slot {0:?} (expected arg0, agent or object)")]
    BadSlot(String),
    #[error("unknown primitive relation {0:?}")]
    BadRelation(String),
    #[error("bad sense suffix in {0:?}")]
    BadSense(String),
    #[error("predication count must be at least 1")]
    ZeroCount,
    #[error("trope noun must be non-empty")]
    EmptyTrope,
    #[error("measure {0} must be non-empty")]
    EmptyMeasureField(&'static str),
    #[error("bad quantity {0:?}")]
    BadQuantity(String),
    #[error("relation {relation} cannot take {object} as object")]
    IllTyped {
        relation: PrimitiveRelation,
        object: &'static str,
    },
}

/// A noun concept, optionally sense-tagged (`book#1`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConceptId {
    lemma: String,
    sense: Option<u16>,
}

impl ConceptId {
    pub fn new(lemma: impl Into<String>) -> Result<Self, ModelError> {
        Self::with_sense(lemma, None)
    }

    pub fn with_sense(lemma: impl Into<String>, sense: Option<u16>) -> Result<Self, ModelError> {
        let lemma = lemma.into();
        if lemma.is_empty() || lemma.chars().any(char::is_whitespace) || lemma.contains('#') {
            return Err(ModelError::BadLemma(lemma));
        }
        Ok(ConceptId {
            lemma: lemma.to_lowercase(),
            sense,
        })
    }

    pub fn lemma(&self) -> &str {
        &self.lemma
    }

    pub fn sense(&self) -> Option<u16> {
        self.sense
    }
}

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sense {
            Some(s) => write!(f, "{}#{}", self.lemma, s),
            None => f.write_str(&self.lemma),
        }
    }
}

impl FromStr for ConceptId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('#') {
            Some((lemma, sense)) => {
                let sense = sense
                    .parse::<u16>()
                    .map_err(|_| ModelError::BadSense(s.to_string()))?;
                ConceptId::with_sense(lemma, Some(sense))
            }
            None => ConceptId::new(s),
        }
    }
}

/// A named individual such as `Frido` or `Billy the Kid`. Case is preserved.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndividualId(String);

impl IndividualId {
    pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(ModelError::BadIndividual(name));
        }
        Ok(IndividualId(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for IndividualId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Subject of a predication: either an individual or a concept.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Individual(IndividualId),
    Concept(ConceptId),
}

impl Subject {
    pub fn level(&self) -> Level {
        match self {
            Subject::Individual(_) => Level::Individual,
            Subject::Concept(_) => Level::Concept,
        }
    }

    pub fn as_concept(&self) -> Option<&ConceptId> {
        match self {
            Subject::Concept(c) => Some(c),
            Subject::Individual(_) => None,
        }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Individual(i) => i.fmt(f),
            Subject::Concept(c) => c.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Individual,
    Concept,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Individual => "individual",
            Level::Concept => "concept",
        }
    }
}

/// Argument position constrained by an applicability fact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Arg0,
    Agent,
    Object,
}

impl Slot {
    pub fn as_str(self) -> &'static str {
        match self {
            Slot::Arg0 => "arg0",
            Slot::Agent => "agent",
            Slot::Object => "object",
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Slot {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "arg0" => Ok(Slot::Arg0),
            "agent" => Ok(Slot::Agent),
            "object" => Ok(Slot::Object),
            other => Err(ModelError::BadSlot(other.to_string())),
        }
    }
}

/// A predicate together with the argument slot it constrains, e.g. `DRIVE/object`.
///
/// Unary predicates (adjectives) use [`Slot::Arg0`]; a binary predicate shows up
/// as two slots, `agent` and `object`. Predicate labels are stored uppercased.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropertySlot {
    predicate: String,
    slot: Slot,
}

impl PropertySlot {
    pub fn new(predicate: impl AsRef<str>, slot: Slot) -> Result<Self, ModelError> {
        let predicate = predicate.as_ref();
        if predicate.is_empty()
            || predicate.chars().any(char::is_whitespace)
            || predicate.contains('/')
        {
            return Err(ModelError::BadPredicate(predicate.to_string()));
        }
        Ok(PropertySlot {
            predicate: predicate.to_uppercase(),
            slot,
        })
    }

    pub fn unary(predicate: impl AsRef<str>) -> Result<Self, ModelError> {
        Self::new(predicate, Slot::Arg0)
    }

    pub fn predicate(&self) -> &str {
        &self.predicate
    }

    pub fn slot(&self) -> Slot {
        self.slot
    }
}

impl fmt::Display for PropertySlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.predicate, self.slot)
    }
}

/// Parses `HEAVY/arg0`; a bare `HEAVY` defaults to `arg0`.
impl FromStr for PropertySlot {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('/') {
            Some((p, slot)) => PropertySlot::new(p, slot.parse()?),
            None => PropertySlot::unary(s),
        }
    }
}

/// Extra material bound by the copula frames that do not reduce to a plain
/// applicability fact: kind membership, identity and measure phrases.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Complement {
    Kind(ConceptId),
    Same(IndividualId),
    Measure(MeasureValue),
}

/// One observed predication.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredicationRecord {
    subject: Subject,
    property: PropertySlot,
    complement: Option<Complement>,
    sentence: Option<String>,
    count: u32,
}

impl PredicationRecord {
    pub fn new(subject: Subject, property: PropertySlot, count: u32) -> Result<Self, ModelError> {
        if count == 0 {
            return Err(ModelError::ZeroCount);
        }
        Ok(PredicationRecord {
            subject,
            property,
            complement: None,
            sentence: None,
            count,
        })
    }

    pub fn with_sentence(mut self, sentence: impl Into<String>) -> Self {
        self.sentence = Some(sentence.into());
        self
    }

    pub fn with_complement(mut self, complement: Complement) -> Self {
        self.complement = Some(complement);
        self
    }

    pub fn subject(&self) -> &Subject {
        &self.subject
    }

    pub fn property(&self) -> &PropertySlot {
        &self.property
    }

    pub fn complement(&self) -> Option<&Complement> {
        self.complement.as_ref()
    }

    pub fn sentence(&self) -> Option<&str> {
        self.sentence.as_deref()
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn level(&self) -> Level {
        self.subject.level()
    }
}

/// The closed set of language-agnostic primitive relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimitiveRelation {
    InstanceOf,
    Eq,
    HasProp,
    InState,
    AgentOf,
    ObjectOf,
    HasValue,
    ParticipantIn,
}

impl PrimitiveRelation {
    pub const ALL: [PrimitiveRelation; 8] = [
        PrimitiveRelation::InstanceOf,
        PrimitiveRelation::Eq,
        PrimitiveRelation::HasProp,
        PrimitiveRelation::InState,
        PrimitiveRelation::AgentOf,
        PrimitiveRelation::ObjectOf,
        PrimitiveRelation::HasValue,
        PrimitiveRelation::ParticipantIn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PrimitiveRelation::InstanceOf => "instanceOf",
            PrimitiveRelation::Eq => "eq",
            PrimitiveRelation::HasProp => "hasProp",
            PrimitiveRelation::InState => "inState",
            PrimitiveRelation::AgentOf => "agentOf",
            PrimitiveRelation::ObjectOf => "objectOf",
            PrimitiveRelation::HasValue => "hasValue",
            PrimitiveRelation::ParticipantIn => "participantIn",
        }
    }
}

impl fmt::Display for PrimitiveRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PrimitiveRelation {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PrimitiveRelation::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| ModelError::BadRelation(s.to_string()))
    }
}

/// A reified predicate: `articulation` from ARTICULATE, `hunger` from HUNGRY.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TropeId {
    noun: String,
    source_predicate: String,
}

impl TropeId {
    pub fn new(
        noun: impl Into<String>,
        source_predicate: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let noun = noun.into();
        if noun.trim().is_empty() {
            return Err(ModelError::EmptyTrope);
        }
        Ok(TropeId {
            noun,
            source_predicate: source_predicate.into().to_uppercase(),
        })
    }

    pub fn noun(&self) -> &str {
        &self.noun
    }

    pub fn source_predicate(&self) -> &str {
        &self.source_predicate
    }
}

impl fmt::Display for TropeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.noun)
    }
}

/// Unit label for feet-and-inches quantities; the amount is stored in inches
/// and printed as `5'10"`.
pub const FEET_INCHES: &str = "ft-in";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Amount {
    quantity: Ratio<i64>,
    unit: String,
}

impl Amount {
    pub fn new(quantity: Ratio<i64>, unit: impl Into<String>) -> Result<Self, ModelError> {
        let unit = unit.into();
        if unit.trim().is_empty() {
            return Err(ModelError::EmptyMeasureField("unit"));
        }
        Ok(Amount { quantity, unit })
    }

    pub fn quantity(&self) -> Ratio<i64> {
        self.quantity
    }

    pub fn unit(&self) -> &str {
        &self.unit
    }
}

impl fmt::Display for Amount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit == FEET_INCHES && self.quantity.is_integer() {
            let inches = self.quantity.to_integer();
            return write!(f, "{}'{}\"", inches / 12, inches % 12);
        }
        write!(f, "{} {}", self.quantity, self.unit)
    }
}

/// Value of a measurable attribute. At concept level the amount is unbound:
/// `car hasValue weight` says cars have a weight, not which one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MeasureValue {
    attribute: String,
    amount: Option<Amount>,
}

impl MeasureValue {
    pub fn new(attribute: impl Into<String>, amount: Option<Amount>) -> Result<Self, ModelError> {
        let attribute = attribute.into();
        if attribute.trim().is_empty() {
            return Err(ModelError::EmptyMeasureField("attribute"));
        }
        Ok(MeasureValue { attribute, amount })
    }

    pub fn attribute(&self) -> &str {
        &self.attribute
    }

    pub fn amount(&self) -> Option<&Amount> {
        self.amount.as_ref()
    }
}

/// Parses `69`, `5.5`, `3/4` and feet-inches literals such as `5'10"`.
/// Feet-inches come back as inches with the [`FEET_INCHES`] unit; typographic
/// primes (`5’10”`) are accepted too.
pub fn parse_quantity(text: &str) -> Result<(Ratio<i64>, Option<&'static str>), ModelError> {
    let bad = || ModelError::BadQuantity(text.to_string());
    if let Some((feet, rest)) = text.split_once(['\'', '\u{2019}', '\u{2032}']) {
        let feet: i64 = feet.parse().map_err(|_| bad())?;
        let inches = rest.trim_end_matches(['"', '\u{201d}', '\u{2033}']);
        let inches: i64 = if inches.is_empty() {
            0
        } else {
            inches.parse().map_err(|_| bad())?
        };
        if !(0..12).contains(&inches) {
            return Err(bad());
        }
        return Ok((Ratio::from_integer(feet * 12 + inches), Some(FEET_INCHES)));
    }
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok((Ratio::new(n, d), None));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: i64 = int.parse().map_err(|_| bad())?;
        let scale = 10i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse().map_err(|_| bad())?;
        let sign = if text.starts_with('-') { -1 } else { 1 };
        return Ok((Ratio::new(int * scale + sign * frac, scale), None));
    }
    Ok((Ratio::from_integer(text.parse().map_err(|_| bad())?), None))
}

/// Object position of a primitive triple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Object {
    Concept(ConceptId),
    Individual(IndividualId),
    Trope(TropeId),
    Measure(MeasureValue),
}

impl Object {
    fn kind_name(&self) -> &'static str {
        match self {
            Object::Concept(_) => "a concept",
            Object::Individual(_) => "an individual",
            Object::Trope(_) => "a trope",
            Object::Measure(_) => "a measure",
        }
    }
}

/// A reified fact `subject relation object`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimitiveTriple {
    subject: Subject,
    relation: PrimitiveRelation,
    object: Object,
}

impl PrimitiveTriple {
    pub fn new(
        subject: Subject,
        relation: PrimitiveRelation,
        object: Object,
    ) -> Result<Self, ModelError> {
        use PrimitiveRelation::*;
        let ok = match relation {
            HasValue => matches!(object, Object::Measure(_)),
            HasProp | InState => matches!(object, Object::Trope(_)),
            InstanceOf => matches!(object, Object::Concept(_)),
            _ => !matches!(object, Object::Measure(_)),
        };
        if !ok {
            return Err(ModelError::IllTyped {
                relation,
                object: object.kind_name(),
            });
        }
        Ok(PrimitiveTriple {
            subject,
            relation,
            object,
        })
    }

    pub fn subject(&self) -> &Subject {
        &self.subject
    }

    pub fn relation(&self) -> PrimitiveRelation {
        self.relation
    }

    pub fn object(&self) -> &Object {
        &self.object
    }
}

/// Renders in the `Frido instanceOf dog` / `Dan's age hasValue 69 YRS` style.
impl fmt::Display for PrimitiveTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.object {
            Object::Measure(m) => {
                write!(f, "{}'s {} {} ", self.subject, m.attribute, self.relation)?;
                match &m.amount {
                    Some(a) => a.fmt(f),
                    None => f.write_str("?"),
                }
            }
            Object::Concept(c) => write!(f, "{} {} {}", self.subject, self.relation, c),
            Object::Individual(i) => write!(f, "{} {} {}", self.subject, self.relation, i),
            Object::Trope(t) => write!(f, "{} {} {}", self.subject, self.relation, t),
        }
    }
}
