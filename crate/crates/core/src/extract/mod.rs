//! Rule-based predication extraction over coarsely tagged sentences.
//!
//! Each [`PatternRule`] is a contiguous token template. A copula frame binds a
//! subject (a run of proper nouns, or a single generic noun) and a predicate;
//! the attributive rule reads `ADJ NOUN` bigrams as concept-level evidence.
//! Proper-noun subjects give individual-level records, which
//! [`generalize`] lifts to concept level through `instanceOf` facts.

mod tagger;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{
    Amount, Complement, ConceptId, IndividualId, Level, MeasureValue, ModelError, Object,
    PredicationRecord, PrimitiveRelation, PrimitiveTriple, PropertySlot, Slot, Subject,
};
use crate::nominal::{nominalize, Category, PredicateLexicon};

pub use tagger::Tagger;

/// Predicate label carried by kind-membership records (`Frido is a dog`).
pub const KIND_PREDICATE: &str = "ISA";
/// Predicate label carried by identity records (`JFK is John Fitzgerald Kennedy`).
pub const IDENTITY_PREDICATE: &str = "EQ";

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("line {line}: malformed token {token:?} (expected surface/TAG)")]
    MalformedToken { line: usize, token: String },
    #[error("line {line}: unknown tag {tag:?}")]
    UnknownTag { line: usize, tag: String },
    #[error("kind fact must use instanceOf, got {0}")]
    NotKindFact(PrimitiveTriple),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Coarse part-of-speech tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    Propn,
    Noun,
    Adj,
    VerbIng,
    VerbPpart,
    Cop,
    DetIndef,
    Num,
    Unit,
    Other,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Propn => "PROPN",
            Tag::Noun => "NOUN",
            Tag::Adj => "ADJ",
            Tag::VerbIng => "VERB-ing",
            Tag::VerbPpart => "VERB-ppart",
            Tag::Cop => "COP",
            Tag::DetIndef => "DET-indef",
            Tag::Num => "NUM",
            Tag::Unit => "UNIT",
            Tag::Other => "OTHER",
        }
    }
}

impl FromStr for Tag {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "PROPN" => Tag::Propn,
            "NOUN" => Tag::Noun,
            "ADJ" => Tag::Adj,
            "VERB-ing" => Tag::VerbIng,
            "VERB-ppart" => Tag::VerbPpart,
            "COP" => Tag::Cop,
            "DET-indef" => Tag::DetIndef,
            "NUM" => Tag::Num,
            "UNIT" => Tag::Unit,
            "OTHER" => Tag::Other,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub tag: Tag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence {
    tokens: Vec<Token>,
}

impl TaggedSentence {
    pub fn new(tokens: Vec<Token>) -> Option<Self> {
        (!tokens.is_empty()).then_some(TaggedSentence { tokens })
    }

    /// Parses one corpus line of space-separated `surface/TAG` pairs.
    /// `line` is only used in error messages. Blank lines give `Ok(None)`.
    pub fn parse_line(text: &str, line: usize) -> Result<Option<Self>, ExtractError> {
        let mut tokens = Vec::new();
        for item in text.split_whitespace() {
            let Some((surface, tag)) = item
                .rsplit_once('/')
                .filter(|(s, t)| !s.is_empty() && !t.is_empty())
            else {
                return Err(ExtractError::MalformedToken {
                    line,
                    token: item.to_string(),
                });
            };
            let tag = tag.parse().map_err(|_| ExtractError::UnknownTag {
                line,
                tag: tag.to_string(),
            })?;
            tokens.push(Token {
                surface: surface.to_string(),
                tag,
            });
        }
        Ok(TaggedSentence::new(tokens))
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Surface text, tokens joined by single spaces.
    pub fn text(&self) -> String {
        let words: Vec<&str> = self.tokens.iter().map(|t| t.surface.as_str()).collect();
        words.join(" ")
    }
}

/// Renders in the corpus line format.
impl fmt::Display for TaggedSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}/{}", t.surface, t.tag.as_str())?;
        }
        Ok(())
    }
}

/// Parses a whole corpus, one tagged sentence per non-blank line. Lines
/// starting with `#` are comments.
pub fn parse_corpus(text: &str) -> Result<Vec<TaggedSentence>, ExtractError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        if let Some(s) = TaggedSentence::parse_line(line, i + 1)? {
            out.push(s);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Elem {
    One(Tag),
    Opt(Tag),
    Plus(Tag),
    /// A maximal run of proper nouns, or a single generic noun.
    Subject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cap {
    Subject,
    Predicate,
    Complement,
    Unit,
}

/// What a rule match binds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Kind,
    Identity,
    Measure,
    Unary,
    Agent,
    Patient,
    Attributive,
}

#[derive(Debug, Clone)]
pub struct PatternRule {
    pub id: &'static str,
    template: &'static [(Elem, Option<Cap>)],
    pub emits: Shape,
}

const RULES: &[PatternRule] = &[
    PatternRule {
        id: "kind",
        template: &[
            (Elem::Plus(Tag::Propn), Some(Cap::Subject)),
            (Elem::One(Tag::Cop), None),
            (Elem::One(Tag::DetIndef), None),
            (Elem::One(Tag::Noun), Some(Cap::Complement)),
        ],
        emits: Shape::Kind,
    },
    PatternRule {
        id: "identity",
        template: &[
            (Elem::Plus(Tag::Propn), Some(Cap::Subject)),
            (Elem::One(Tag::Cop), None),
            (Elem::Plus(Tag::Propn), Some(Cap::Complement)),
        ],
        emits: Shape::Identity,
    },
    PatternRule {
        id: "measure",
        template: &[
            (Elem::Subject, Some(Cap::Subject)),
            (Elem::One(Tag::Cop), None),
            (Elem::One(Tag::Num), Some(Cap::Complement)),
            (Elem::Opt(Tag::Unit), Some(Cap::Unit)),
            (Elem::One(Tag::Adj), Some(Cap::Predicate)),
        ],
        emits: Shape::Measure,
    },
    PatternRule {
        id: "copula-adj",
        template: &[
            (Elem::Subject, Some(Cap::Subject)),
            (Elem::One(Tag::Cop), None),
            (Elem::One(Tag::Adj), Some(Cap::Predicate)),
        ],
        emits: Shape::Unary,
    },
    PatternRule {
        id: "progressive",
        template: &[
            (Elem::Subject, Some(Cap::Subject)),
            (Elem::One(Tag::Cop), None),
            (Elem::One(Tag::VerbIng), Some(Cap::Predicate)),
        ],
        emits: Shape::Agent,
    },
    PatternRule {
        id: "passive",
        template: &[
            (Elem::Subject, Some(Cap::Subject)),
            (Elem::One(Tag::Cop), None),
            (Elem::One(Tag::VerbPpart), Some(Cap::Predicate)),
        ],
        emits: Shape::Patient,
    },
    PatternRule {
        id: "attributive",
        template: &[
            (Elem::One(Tag::Adj), Some(Cap::Predicate)),
            (Elem::One(Tag::Noun), Some(Cap::Subject)),
        ],
        emits: Shape::Attributive,
    },
];

pub fn rules() -> &'static [PatternRule] {
    RULES
}

type Spans = BTreeMap<u8, (usize, usize)>;

fn cap_key(c: Cap) -> u8 {
    c as u8
}

fn match_at(
    template: &[(Elem, Option<Cap>)],
    tokens: &[Token],
    pos: usize,
    spans: &mut Spans,
) -> bool {
    let Some(&(elem, cap)) = template.first() else {
        return true;
    };
    let rest = &template[1..];
    let try_len = |len: usize, spans: &mut Spans| -> bool {
        if let Some(c) = cap {
            spans.insert(cap_key(c), (pos, pos + len));
        }
        if match_at(rest, tokens, pos + len, spans) {
            return true;
        }
        if let Some(c) = cap {
            spans.remove(&cap_key(c));
        }
        false
    };
    let is = |i: usize, tag: Tag| tokens.get(i).is_some_and(|t| t.tag == tag);
    match elem {
        Elem::One(tag) => is(pos, tag) && try_len(1, spans),
        Elem::Opt(tag) => (is(pos, tag) && try_len(1, spans)) || try_len(0, spans),
        Elem::Plus(tag) => run_len(tokens, pos, tag).is_some_and(|n| try_len(n, spans)),
        Elem::Subject if is(pos, Tag::Propn) => {
            run_len(tokens, pos, Tag::Propn).is_some_and(|n| try_len(n, spans))
        }
        Elem::Subject => is(pos, Tag::Noun) && try_len(1, spans),
    }
}

/// Length of the tag run starting at `pos`. Runs must start at a boundary and
/// are consumed whole.
fn run_len(tokens: &[Token], pos: usize, tag: Tag) -> Option<usize> {
    if pos > 0 && tokens[pos - 1].tag == tag {
        return None;
    }
    let n = tokens[pos.min(tokens.len())..]
        .iter()
        .take_while(|t| t.tag == tag)
        .count();
    (n > 0).then_some(n)
}

fn words(tokens: &[Token], (a, b): (usize, usize)) -> String {
    let w: Vec<&str> = tokens[a..b].iter().map(|t| t.surface.as_str()).collect();
    w.join(" ")
}

/// Records extracted from one corpus, plus the sentences no rule matched.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusExtraction {
    pub records: Vec<PredicationRecord>,
    pub skipped: Vec<String>,
}

impl CorpusExtraction {
    /// One `SKIP<TAB><sentence>` line per unmatched sentence.
    pub fn skip_log(&self) -> String {
        self.skipped
            .iter()
            .map(|s| format!("SKIP\t{s}\n"))
            .collect()
    }
}

pub fn extract_corpus(
    sentences: &[TaggedSentence],
    lexicon: &PredicateLexicon,
) -> CorpusExtraction {
    let mut out = CorpusExtraction::default();
    for s in sentences {
        let recs = extract(s, lexicon);
        if recs.is_empty() {
            out.skipped.push(s.text());
        }
        out.records.extend(recs);
    }
    out
}

/// Applies every rule at every position. Each returned record comes from
/// exactly one rule match.
pub fn extract(sentence: &TaggedSentence, lexicon: &PredicateLexicon) -> Vec<PredicationRecord> {
    let tokens = sentence.tokens();
    let text = sentence.text();
    let mut out = Vec::new();
    for rule in RULES {
        for pos in 0..tokens.len() {
            let mut spans = Spans::new();
            if !match_at(rule.template, tokens, pos, &mut spans) {
                continue;
            }
            if let Some(rec) = emit(rule.emits, tokens, &spans, lexicon) {
                out.push(rec.with_sentence(text.clone()));
            }
        }
    }
    out
}

fn emit(
    shape: Shape,
    tokens: &[Token],
    spans: &Spans,
    lex: &PredicateLexicon,
) -> Option<PredicationRecord> {
    let span = |c: Cap| spans.get(&cap_key(c)).copied().filter(|(a, b)| b > a);
    let subj_span = span(Cap::Subject)?;
    let subject = if tokens[subj_span.0].tag == Tag::Propn {
        Subject::Individual(IndividualId::new(words(tokens, subj_span)).ok()?)
    } else {
        Subject::Concept(ConceptId::new(tokens[subj_span.0].surface.to_lowercase()).ok()?)
    };
    let pred_word = span(Cap::Predicate).map(|(a, _)| tokens[a].surface.as_str());
    let record = match shape {
        Shape::Kind => {
            let kind = ConceptId::new(words(tokens, span(Cap::Complement)?).to_lowercase()).ok()?;
            PredicationRecord::new(subject, PropertySlot::unary(KIND_PREDICATE).ok()?, 1)
                .ok()?
                .with_complement(Complement::Kind(kind))
        }
        Shape::Identity => {
            let other = IndividualId::new(words(tokens, span(Cap::Complement)?)).ok()?;
            PredicationRecord::new(subject, PropertySlot::unary(IDENTITY_PREDICATE).ok()?, 1)
                .ok()?
                .with_complement(Complement::Same(other))
        }
        Shape::Measure => {
            let adj = pred_word?.to_lowercase();
            let (quantity, embedded) =
                crate::model::parse_quantity(&tokens[span(Cap::Complement)?.0].surface).ok()?;
            let unit = match (embedded, span(Cap::Unit)) {
                (Some(u), _) => u.to_string(),
                (None, Some((a, _))) => normalize_unit(&tokens[a].surface),
                (None, None) => return None,
            };
            let attribute = lex
                .get(&adj)
                .and_then(|e| e.attribute.clone())
                .unwrap_or_else(|| nominalize(&adj, false, lex).noun().to_string());
            let value =
                MeasureValue::new(attribute, Some(Amount::new(quantity, unit).ok()?)).ok()?;
            PredicationRecord::new(subject, PropertySlot::unary(&adj).ok()?, 1)
                .ok()?
                .with_complement(Complement::Measure(value))
        }
        Shape::Unary | Shape::Attributive => PredicationRecord::new(
            subject,
            PropertySlot::unary(pred_word?.to_lowercase()).ok()?,
            1,
        )
        .ok()?,
        Shape::Agent => {
            let lemma = verb_lemma(pred_word?, true, lex);
            PredicationRecord::new(subject, PropertySlot::new(lemma, Slot::Agent).ok()?, 1).ok()?
        }
        Shape::Patient => {
            let lemma = verb_lemma(pred_word?, false, lex);
            PredicationRecord::new(subject, PropertySlot::new(lemma, Slot::Object).ok()?, 1).ok()?
        }
    };
    Some(record)
}

fn normalize_unit(unit: &str) -> String {
    match unit.to_lowercase().as_str() {
        "year" | "years" | "yr" | "yrs" => "YRS".into(),
        "inch" | "inches" | "in" => "in".into(),
        "foot" | "feet" | "ft" => "ft".into(),
        "pound" | "pounds" | "lb" | "lbs" => "lbs".into(),
        "kilograms" | "kg" => "kg".into(),
        "meters" | "m" => "m".into(),
        other => other.to_string(),
    }
}

/// Lemma of an inflected verb form. Known forms come from the tagger's verb
/// table; otherwise candidate stems are checked against the lexicon before
/// falling back to plain suffix stripping.
pub fn verb_lemma(surface: &str, progressive: bool, lex: &PredicateLexicon) -> String {
    let w = surface.to_lowercase();
    if let Some((lemma, _, _)) =
        tagger::VERBS
            .iter()
            .find(|(_, ing, ppart)| if progressive { *ing == w } else { *ppart == w })
    {
        return lemma.to_string();
    }
    let suffix = if progressive { "ing" } else { "ed" };
    let Some(stem) = w.strip_suffix(suffix).filter(|s| s.len() > 1) else {
        return w;
    };
    let mut candidates = vec![stem.to_string(), format!("{stem}e")];
    let undoubled = undouble(stem);
    if let Some(u) = &undoubled {
        candidates.push(u.clone());
    }
    if let Some(base) = stem.strip_suffix('i').filter(|_| !progressive) {
        candidates.push(format!("{base}y"));
    }
    let is_verb = |c: &String| {
        lex.get(c)
            .is_some_and(|e| e.category == Category::ActionVerb)
    };
    if let Some(hit) = candidates.iter().find(|c| is_verb(c)) {
        return hit.clone();
    }
    undoubled.unwrap_or_else(|| stem.to_string())
}

fn undouble(stem: &str) -> Option<String> {
    let b = stem.as_bytes();
    let n = b.len();
    (n >= 3 && b[n - 1] == b[n - 2] && !b"aeioulsz".contains(&b[n - 1]))
        .then(|| stem[..n - 1].to_string())
}

/// Outcome of lifting individual-level evidence to concept level.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Generalization {
    pub records: Vec<PredicationRecord>,
    /// Individual-level records whose subject has no kind link.
    pub residue: Vec<PredicationRecord>,
}

/// `instanceOf` facts read off kind-membership records.
pub fn kind_facts(records: &[PredicationRecord]) -> Vec<PrimitiveTriple> {
    records
        .iter()
        .filter_map(|r| match r.complement() {
            Some(Complement::Kind(k)) => PrimitiveTriple::new(
                r.subject().clone(),
                PrimitiveRelation::InstanceOf,
                Object::Concept(k.clone()),
            )
            .ok(),
            _ => None,
        })
        .collect()
}

/// Lifts individual-level records to the kinds their subjects instantiate.
///
/// Concept-level records pass through unchanged and come first; lifted
/// records follow in (concept, property) order with counts summed. Kind and
/// identity records carry no applicability evidence and are not lifted.
pub fn generalize(
    records: &[PredicationRecord],
    kinds: &[PrimitiveTriple],
) -> Result<Generalization, ExtractError> {
    let mut links: BTreeMap<&Subject, Vec<&ConceptId>> = BTreeMap::new();
    for fact in kinds {
        let (PrimitiveRelation::InstanceOf, Object::Concept(k)) = (fact.relation(), fact.object())
        else {
            return Err(ExtractError::NotKindFact(fact.clone()));
        };
        let entry = links.entry(fact.subject()).or_default();
        if !entry.contains(&k) {
            entry.push(k);
        }
    }
    let mut out = Generalization::default();
    let mut lifted: BTreeMap<(ConceptId, PropertySlot), u32> = BTreeMap::new();
    for r in records {
        if matches!(
            r.complement(),
            Some(Complement::Kind(_) | Complement::Same(_))
        ) {
            continue;
        }
        if r.level() == Level::Concept {
            out.records.push(r.clone());
            continue;
        }
        match links.get(r.subject()) {
            Some(ks) => {
                for k in ks {
                    *lifted
                        .entry(((*k).clone(), r.property().clone()))
                        .or_default() += r.count();
                }
            }
            None => out.residue.push(r.clone()),
        }
    }
    for ((k, p), count) in lifted {
        out.records
            .push(PredicationRecord::new(Subject::Concept(k), p, count)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> Vec<PredicationRecord> {
        let s = Tagger::default().tag(text).unwrap();
        extract(&s, &PredicateLexicon::seed())
    }

    fn one(text: &str) -> PredicationRecord {
        let mut v = run(text);
        assert_eq!(v.len(), 1, "{text}: {v:?}");
        v.remove(0)
    }

    #[test]
    fn kind_frame() {
        let r = one("Frido is a dog");
        assert_eq!(r.subject().to_string(), "Frido");
        assert_eq!(
            r.complement(),
            Some(&Complement::Kind(ConceptId::new("dog").unwrap()))
        );
        assert_eq!(r.sentence(), Some("Frido is a dog"));
        assert_eq!(r.count(), 1);
    }

    #[test]
    fn adjective_frame() {
        let r = one("Mary is wise");
        assert_eq!(r.property().to_string(), "WISE/arg0");
        assert_eq!(r.level(), Level::Individual);
    }

    #[test]
    fn passive_frame() {
        assert_eq!(
            one("Sara is greeted").property().to_string(),
            "GREET/object"
        );
        assert_eq!(
            one("Sara is acknowledged").property().to_string(),
            "ACKNOWLEDGE/object"
        );
        assert_eq!(one("Sara is running").property().to_string(), "RUN/agent");
    }

    #[test]
    fn attributive_bigram() {
        let r = one("heavy car");
        assert_eq!(
            r.subject(),
            &Subject::Concept(ConceptId::new("car").unwrap())
        );
        assert_eq!(r.property().to_string(), "HEAVY/arg0");
        assert_eq!(r.level(), Level::Concept);
    }

    #[test]
    fn nothing_fires() {
        assert!(run("Thursday sky").is_empty());
        // generic noun-is-noun is not read as subtyping
        assert!(run("a dog is an animal").is_empty());
    }

    #[test]
    fn measure_without_unit_is_skipped() {
        let s = TaggedSentence::parse_line("Tom/PROPN is/COP 30/NUM old/ADJ", 1)
            .unwrap()
            .unwrap();
        assert!(extract(&s, &PredicateLexicon::seed()).is_empty());
    }

    #[test]
    fn corpus_line_errors() {
        let err = parse_corpus("Mary/PROPN is/COP wise/ADJ\nMary is/COP").unwrap_err();
        assert!(matches!(err, ExtractError::MalformedToken { line: 2, .. }));
        let err = parse_corpus("Mary/PRON").unwrap_err();
        assert!(matches!(err, ExtractError::UnknownTag { line: 1, .. }));
        assert!(parse_corpus("\n\n").unwrap().is_empty());
    }

    #[test]
    fn tagged_line_round_trip() {
        let s = Tagger::default().tag("John is 5'10\" tall").unwrap();
        let again = TaggedSentence::parse_line(&s.to_string(), 1)
            .unwrap()
            .unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn lemmas() {
        let lex = PredicateLexicon::seed();
        let empty = PredicateLexicon::default();
        assert_eq!(verb_lemma("dancing", true, &lex), "dance");
        assert_eq!(verb_lemma("jogging", true, &empty), "jog");
        assert_eq!(verb_lemma("stalled", false, &empty), "stall");
        assert_eq!(verb_lemma("charged", false, &lex), "charge");
        assert_eq!(verb_lemma("chewed", false, &empty), "chew");
    }

    fn rec(subject: Subject, p: &str, count: u32) -> PredicationRecord {
        PredicationRecord::new(subject, p.parse().unwrap(), count).unwrap()
    }

    fn ind(s: &str) -> Subject {
        Subject::Individual(IndividualId::new(s).unwrap())
    }

    fn con(s: &str) -> Subject {
        Subject::Concept(ConceptId::new(s).unwrap())
    }

    fn isa(i: &str, k: &str) -> PrimitiveTriple {
        PrimitiveTriple::new(
            ind(i),
            PrimitiveRelation::InstanceOf,
            Object::Concept(ConceptId::new(k).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn generalize_lifts_through_kinds() {
        let g = generalize(&[rec(ind("Frido"), "HUNGRY", 1)], &[isa("Frido", "dog")]).unwrap();
        assert_eq!(g.records, vec![rec(con("dog"), "HUNGRY", 1)]);
        assert!(g.residue.is_empty());
    }

    #[test]
    fn generalize_edge_cases() {
        assert_eq!(
            generalize(&[], &[isa("Frido", "dog")]).unwrap(),
            Generalization::default()
        );
        let car = rec(con("car"), "HEAVY", 1);
        assert_eq!(
            generalize(std::slice::from_ref(&car), &[]).unwrap().records,
            vec![car]
        );
        let g = generalize(&[rec(ind("Rex"), "OLD", 2)], &[]).unwrap();
        assert!(g.records.is_empty());
        assert_eq!(g.residue.len(), 1);
        let bad = PrimitiveTriple::new(
            ind("A"),
            PrimitiveRelation::Eq,
            Object::Individual(IndividualId::new("B").unwrap()),
        )
        .unwrap();
        assert!(matches!(
            generalize(&[], &[bad]),
            Err(ExtractError::NotKindFact(_))
        ));
    }

    #[test]
    fn generalize_multiple_kinds_and_summing() {
        let recs = [rec(ind("Rex"), "OLD", 2), rec(ind("Fido"), "OLD", 3)];
        let kinds = [isa("Rex", "dog"), isa("Rex", "pet"), isa("Fido", "dog")];
        let g = generalize(&recs, &kinds).unwrap();
        assert_eq!(
            g.records,
            vec![rec(con("dog"), "OLD", 5), rec(con("pet"), "OLD", 2)]
        );
    }
}
