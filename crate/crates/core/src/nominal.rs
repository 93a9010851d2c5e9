//! Predicate classification and reification of applicability facts into
//! primitive-relation triples.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{
    Complement, MeasureValue, ModelError, Object, PredicationRecord, PrimitiveRelation,
    PrimitiveTriple, PropertySlot, Slot, Subject, TropeId,
};

const SEED_LEXICON: &str = include_str!("../data/seed_lexicon.tsv");

#[derive(Debug, Error)]
pub enum NominalError {
    #[error("lexicon line {line}: {message}")]
    Lexicon { line: usize, message: String },
    #[error(
        "predicate {predicate} is classified as {category}; it cannot be reified at concept level"
    )]
    NotReifiable {
        predicate: String,
        category: Category,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    PropertyAdj,
    StateAdj,
    ActionVerb,
    MeasureAdj,
    Identity,
    Kind,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::PropertyAdj => "property-adj",
            Category::StateAdj => "state-adj",
            Category::ActionVerb => "action-verb",
            Category::MeasureAdj => "measure-adj",
            Category::Identity => "identity",
            Category::Kind => "kind",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "property-adj" => Category::PropertyAdj,
            "state-adj" => Category::StateAdj,
            "action-verb" => Category::ActionVerb,
            "measure-adj" => Category::MeasureAdj,
            "identity" => Category::Identity,
            "kind" => Category::Kind,
            other => return Err(format!("unknown category {other:?}")),
        })
    }
}

/// Which relation links an agent-slot subject to the event trope.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum AgentRelation {
    #[default]
    AgentOf,
    ParticipantIn,
}

impl AgentRelation {
    pub fn relation(self) -> PrimitiveRelation {
        match self {
            AgentRelation::AgentOf => PrimitiveRelation::AgentOf,
            AgentRelation::ParticipantIn => PrimitiveRelation::ParticipantIn,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub category: Category,
    pub trope: Option<String>,
    pub attribute: Option<String>,
    pub agent_relation: AgentRelation,
}

/// Predicate lexicon keyed by lowercase lemma.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PredicateLexicon {
    entries: BTreeMap<String, LexEntry>,
}

impl PredicateLexicon {
    /// The lexicon shipped with the crate; covers every predicate of the
    /// bundled fixtures.
    pub fn seed() -> Self {
        Self::parse(SEED_LEXICON).expect("seed lexicon is well-formed")
    }

    /// Parses the tab-separated format
    /// `lemma<TAB>category<TAB>trope<TAB>attribute<TAB>agentRelation`.
    pub fn parse(text: &str) -> Result<Self, NominalError> {
        let mut lex = PredicateLexicon::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| NominalError::Lexicon { line, message };
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').map(str::trim).collect();
            if cols.len() != 5 {
                return Err(err(format!(
                    "expected 5 tab-separated columns, found {}",
                    cols.len()
                )));
            }
            let opt = |s: &str| (s != "-" && !s.is_empty()).then(|| s.to_string());
            let category: Category = cols[1].parse().map_err(err)?;
            let agent_relation = match cols[4] {
                "-" | "" | "agentOf" => AgentRelation::AgentOf,
                "participantIn" => AgentRelation::ParticipantIn,
                other => {
                    return Err(err(format!(
                        "agentRelation must be agentOf or participantIn, got {other:?}"
                    )))
                }
            };
            let entry = LexEntry {
                category,
                trope: opt(cols[2]),
                attribute: opt(cols[3]),
                agent_relation,
            };
            match category {
                Category::PropertyAdj | Category::StateAdj if entry.trope.is_none() => {
                    return Err(err(format!(
                        "{} entry {:?} needs a trope",
                        category, cols[0]
                    )));
                }
                Category::MeasureAdj if entry.attribute.is_none() => {
                    return Err(err(format!(
                        "measure-adj entry {:?} needs an attribute",
                        cols[0]
                    )));
                }
                _ => {}
            }
            let lemma = cols[0].to_lowercase();
            if lemma.is_empty() || lemma.chars().any(char::is_whitespace) {
                return Err(err(format!("bad lemma {:?}", cols[0])));
            }
            if lex.entries.insert(lemma.clone(), entry).is_some() {
                return Err(err(format!("duplicate lemma {lemma:?}")));
            }
        }
        Ok(lex)
    }

    pub fn get(&self, lemma: &str) -> Option<&LexEntry> {
        self.entries.get(&lemma.to_lowercase())
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.get(lemma).is_some()
    }

    pub fn insert(&mut self, lemma: &str, entry: LexEntry) -> Option<LexEntry> {
        self.entries.insert(lemma.to_lowercase(), entry)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &LexEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Tropes claimed by more than one lemma. Profiles count one trope per
    /// predicate, so a clean lexicon returns nothing here.
    pub fn duplicate_tropes(&self) -> Vec<(String, Vec<String>)> {
        let mut by_trope: BTreeMap<&str, Vec<String>> = BTreeMap::new();
        for (lemma, e) in &self.entries {
            if let Some(t) = &e.trope {
                by_trope.entry(t).or_default().push(lemma.clone());
            }
        }
        by_trope
            .into_iter()
            .filter(|(_, v)| v.len() > 1)
            .map(|(t, v)| (t.to_string(), v))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub category: Category,
    /// Set when the lexicon had no entry and a fallback rule decided.
    pub fallback: bool,
}

pub fn classify(p: &PropertySlot, lex: &PredicateLexicon) -> Classification {
    if let Some(e) = lex.get(p.predicate()) {
        return Classification {
            category: e.category,
            fallback: false,
        };
    }
    let category = match p.slot() {
        Slot::Agent | Slot::Object => Category::ActionVerb,
        Slot::Arg0 if p.predicate().ends_with("ING") => Category::ActionVerb,
        Slot::Arg0 => Category::PropertyAdj,
    };
    Classification {
        category,
        fallback: true,
    }
}

/// Rewrites `app(p, subject)` as a primitive triple.
pub fn reify(
    p: &PropertySlot,
    subject: &Subject,
    lex: &PredicateLexicon,
) -> Result<PrimitiveTriple, NominalError> {
    let class = classify(p, lex);
    let entry = lex.get(p.predicate());
    let relation = match class.category {
        Category::PropertyAdj => PrimitiveRelation::HasProp,
        Category::StateAdj => PrimitiveRelation::InState,
        Category::ActionVerb => match p.slot() {
            Slot::Object => PrimitiveRelation::ObjectOf,
            Slot::Agent | Slot::Arg0 => entry
                .map(|e| e.agent_relation)
                .unwrap_or_default()
                .relation(),
        },
        Category::MeasureAdj => {
            let attribute = entry
                .and_then(|e| e.attribute.clone())
                .unwrap_or_else(|| nominalize(p.predicate(), false, lex).noun().to_string());
            let object = Object::Measure(MeasureValue::new(attribute, None)?);
            return Ok(PrimitiveTriple::new(
                subject.clone(),
                PrimitiveRelation::HasValue,
                object,
            )?);
        }
        Category::Identity | Category::Kind => {
            return Err(NominalError::NotReifiable {
                predicate: p.predicate().to_string(),
                category: class.category,
            })
        }
    };
    let trope = nominalize(p.predicate(), class.category == Category::ActionVerb, lex);
    Ok(PrimitiveTriple::new(
        subject.clone(),
        relation,
        Object::Trope(trope),
    )?)
}

/// Reifies an extracted record, honouring the kind, identity and measure
/// material bound by its copula frame.
pub fn reify_record(
    record: &PredicationRecord,
    lex: &PredicateLexicon,
) -> Result<PrimitiveTriple, NominalError> {
    let subject = record.subject().clone();
    let triple = match record.complement() {
        Some(Complement::Kind(k)) => PrimitiveTriple::new(
            subject,
            PrimitiveRelation::InstanceOf,
            Object::Concept(k.clone()),
        )?,
        Some(Complement::Same(i)) => PrimitiveTriple::new(
            subject,
            PrimitiveRelation::Eq,
            Object::Individual(i.clone()),
        )?,
        Some(Complement::Measure(m)) => PrimitiveTriple::new(
            subject,
            PrimitiveRelation::HasValue,
            Object::Measure(m.clone()),
        )?,
        None => reify(record.property(), record.subject(), lex)?,
    };
    Ok(triple)
}

/// Nominal form of a predicate: the lexicon trope when there is one, otherwise
/// suffix rules. Verb-ness is read from the lexicon category.
pub fn nominalize_lemma(predicate: &str, lex: &PredicateLexicon) -> TropeId {
    let verb = lex
        .get(predicate)
        .is_some_and(|e| e.category == Category::ActionVerb);
    nominalize(predicate, verb, lex)
}

pub(crate) fn nominalize(predicate: &str, verb: bool, lex: &PredicateLexicon) -> TropeId {
    let lemma = predicate.to_lowercase();
    let noun = match lex.get(&lemma).and_then(|e| e.trope.clone()) {
        Some(t) => t,
        None => suffix_rules(&lemma, verb),
    };
    TropeId::new(noun, predicate).expect("nominal forms are never empty")
}

fn suffix_rules(w: &str, verb: bool) -> String {
    if w.len() > 3 && w.ends_with("ate") {
        return format!("{}ation", &w[..w.len() - 3]);
    }
    if verb {
        if w.ends_with("ing") {
            return w.to_string();
        }
        let stem = if w.len() > 3 && w.ends_with("ied") {
            format!("{}y", &w[..w.len() - 3])
        } else if w.len() > 4 && (w.ends_with("ed") || w.ends_with("en")) {
            w[..w.len() - 2].to_string()
        } else {
            w.to_string()
        };
        return gerund(&stem);
    }
    if w.len() > 1 && w.ends_with('y') && !w[..w.len() - 1].ends_with(['a', 'e', 'i', 'o', 'u']) {
        return format!("{}iness", &w[..w.len() - 1]);
    }
    format!("{w}ness")
}

fn gerund(stem: &str) -> String {
    match stem.strip_suffix('e') {
        Some(base) if !base.is_empty() && !base.ends_with(['e', 'y', 'o']) => format!("{base}ing"),
        _ => format!("{stem}ing"),
    }
}
