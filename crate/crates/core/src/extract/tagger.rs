//! A small closed-list tagger for the bundled corpora.

use std::collections::HashMap;

use super::{Tag, TaggedSentence, Token};

const COPULAS: &[&str] = &["is", "are", "was", "were", "am", "be"];
const INDEFINITES: &[&str] = &["a", "an"];
const FUNCTION_WORDS: &[&str] = &[
    "the", "this", "that", "these", "those", "of", "and", "not", "very", "de", "von", "van",
];
const NAME_PARTICLES: &[&str] = &["the", "of", "de", "von", "van"];

const ADJECTIVES: &[&str] = &[
    "articulate",
    "big",
    "blue",
    "controversial",
    "delicious",
    "fresh",
    "happy",
    "heavy",
    "hungry",
    "ill",
    "influential",
    "light",
    "long",
    "off",
    "old",
    "on",
    "popular",
    "red",
    "sad",
    "short",
    "small",
    "tall",
    "tasty",
    "wise",
    "young",
];

const NOUNS: &[&str] = &[
    "apple", "bicycle", "book", "cake", "car", "chair", "computer", "couch", "day", "dog",
    "hammer", "human", "idea", "machine", "movie", "person", "rock", "sky", "table", "thursday",
];

/// (lemma, present participle, past participle)
pub(crate) const VERBS: &[(&str, &str, &str)] = &[
    ("acknowledge", "acknowledging", "acknowledged"),
    ("assemble", "assembling", "assembled"),
    ("bake", "baking", "baked"),
    ("bark", "barking", "barked"),
    ("change", "changing", "changed"),
    ("charge", "charging", "charged"),
    ("dance", "dancing", "danced"),
    ("drive", "driving", "driven"),
    ("eat", "eating", "eaten"),
    ("greet", "greeting", "greeted"),
    ("inspire", "inspiring", "inspired"),
    ("make", "making", "made"),
    ("manufacture", "manufacturing", "manufactured"),
    ("program", "programming", "programmed"),
    ("read", "reading", "read"),
    ("repair", "repairing", "repaired"),
    ("ride", "riding", "ridden"),
    ("run", "running", "run"),
    ("sit", "sitting", "sat"),
    ("sleep", "sleeping", "slept"),
    ("upholster", "upholstering", "upholstered"),
    ("walk", "walking", "walked"),
    ("write", "writing", "written"),
];

const UNITS: &[&str] = &[
    "year",
    "years",
    "yrs",
    "inch",
    "inches",
    "foot",
    "feet",
    "ft",
    "cm",
    "kg",
    "kilograms",
    "meters",
    "pound",
    "pounds",
    "lbs",
];

#[derive(Debug, Clone)]
pub struct Tagger {
    words: HashMap<String, Tag>,
}

impl Default for Tagger {
    fn default() -> Self {
        let mut words = HashMap::new();
        let lists: [(&[&str], Tag); 6] = [
            (FUNCTION_WORDS, Tag::Other),
            (COPULAS, Tag::Cop),
            (INDEFINITES, Tag::DetIndef),
            (ADJECTIVES, Tag::Adj),
            (NOUNS, Tag::Noun),
            (UNITS, Tag::Unit),
        ];
        for (list, tag) in lists {
            for w in list {
                words.insert(w.to_string(), tag);
            }
        }
        for (_, ing, ppart) in VERBS {
            words.insert(ing.to_string(), Tag::VerbIng);
            words.insert(ppart.to_string(), Tag::VerbPpart);
        }
        Tagger { words }
    }
}

impl Tagger {
    pub fn add_word(&mut self, word: &str, tag: Tag) {
        self.words.insert(word.to_lowercase(), tag);
    }

    /// Tags a plain sentence. Returns `None` for blank input.
    pub fn tag(&self, text: &str) -> Option<TaggedSentence> {
        let mut raw: Vec<&str> = text.split_whitespace().collect();
        if let Some(last) = raw.last_mut() {
            *last = strip_final_punct(last);
            if last.is_empty() {
                raw.pop();
            }
        }
        if raw.is_empty() {
            return None;
        }
        let mut tokens: Vec<Token> = raw
            .iter()
            .map(|w| Token {
                surface: w.to_string(),
                tag: self.tag_word(w),
            })
            .collect();
        // name-internal particles: Billy the Kid
        for i in 1..tokens.len().saturating_sub(1) {
            if tokens[i - 1].tag == Tag::Propn
                && tokens[i + 1].tag == Tag::Propn
                && NAME_PARTICLES.contains(&tokens[i].surface.as_str())
            {
                tokens[i].tag = Tag::Propn;
            }
        }
        Some(TaggedSentence::new(tokens).expect("non-empty"))
    }

    fn tag_word(&self, w: &str) -> Tag {
        if let Some(tag) = self.words.get(&w.to_lowercase()) {
            return *tag;
        }
        if is_number(w) {
            return Tag::Num;
        }
        if w.chars().next().is_some_and(char::is_uppercase) {
            return Tag::Propn;
        }
        Tag::Other
    }
}

fn strip_final_punct(w: &str) -> &str {
    // keep initials such as "H."
    let initial = w.len() == 2 && w.starts_with(|c: char| c.is_uppercase()) && w.ends_with('.');
    if initial {
        w
    } else {
        w.trim_end_matches(['.', '!', '?', ','])
    }
}

fn is_number(w: &str) -> bool {
    crate::model::parse_quantity(w).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(s: &str) -> Vec<Tag> {
        Tagger::default()
            .tag(s)
            .unwrap()
            .tokens()
            .iter()
            .map(|t| t.tag)
            .collect()
    }

    #[test]
    fn names_and_particles() {
        use Tag::*;
        assert_eq!(
            tags("Billy the Kid is William H. Boney"),
            vec![Propn, Propn, Propn, Cop, Propn, Propn, Propn]
        );
        assert_eq!(
            tags("The computer is running."),
            vec![Other, Noun, Cop, VerbIng]
        );
    }

    #[test]
    fn measures() {
        use Tag::*;
        assert_eq!(tags("John is 5'10\" tall"), vec![Propn, Cop, Num, Adj]);
        assert_eq!(
            tags("Dan is 69 years old"),
            vec![Propn, Cop, Num, Unit, Adj]
        );
    }

    #[test]
    fn blank_input() {
        assert!(Tagger::default().tag("   ").is_none());
        assert!(Tagger::default().tag(" . ").is_none());
    }
}
