use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use ontoforge::elicit::{
    candidates_to_records, fetch_all, parse_candidates, render_prompt, vote, Endpoint,
    FetchOptions, Inflections, PromptTemplate, Transcript, TranscriptCache,
};
use ontoforge::extract::{extract_corpus, parse_corpus, Tagger};
use ontoforge::lattice::{LabelSeed, TypeLattice};
use ontoforge::nominal::PredicateLexicon;
use ontoforge::pipeline::{build, tag_raw};
use ontoforge::query::{QueryEngine, QueryError, Sensibility, PROFILE_DIMENSIONS};
use ontoforge::store::{
    lattice_from_json, lattice_to_dot, lattice_to_json, read_records, write_records, ProjectStore,
};
use ontoforge::{ConceptId, PredicationRecord, PrimitiveRelation, PropertySlot, Subject};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::http::HttpEndpoint;
use crate::{Command, Format, LexiconArg, Query};

/// 2 for questions about symbols the project has never seen, 1 otherwise.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    let unknown = e.chain().any(|c| {
        c.downcast_ref::<QueryError>()
            .is_some_and(QueryError::is_unknown_symbol)
    });
    if unknown {
        2
    } else {
        1
    }
}

/// Writes to standard output; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r.context("writing to standard output"),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn lexicon(arg: &LexiconArg) -> Result<PredicateLexicon> {
    let mut lex = PredicateLexicon::seed();
    if let Some(path) = &arg.lexicon {
        let extra = PredicateLexicon::parse(&read(path)?)
            .with_context(|| format!("lexicon {}", path.display()))?;
        for (lemma, entry) in extra.iter() {
            lex.insert(lemma, entry.clone());
        }
    }
    Ok(lex)
}

fn inflections(path: Option<&Path>) -> Result<Inflections> {
    match path {
        Some(p) => {
            Inflections::parse(&read(p)?).with_context(|| format!("inflections {}", p.display()))
        }
        None => Ok(Inflections::default()),
    }
}

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Tag { corpus } => {
            for s in tag_raw(&read(&corpus)?, &Tagger::default()) {
                emit(&format!("{s}\n"))?;
            }
            Ok(())
        }
        Command::Extract {
            corpus,
            raw,
            lexicon: lex_arg,
            out,
            skip_log,
        } => {
            let text = read(&corpus)?;
            let sentences = if raw {
                tag_raw(&text, &Tagger::default())
            } else {
                parse_corpus(&text).with_context(|| format!("corpus {}", corpus.display()))?
            };
            let ex = extract_corpus(&sentences, &lexicon(&lex_arg)?);
            write(&out, &write_records(&ex.records))?;
            write(&skip_log, &ex.skip_log())?;
            emit(&format!(
                "{} sentences, {} records, {} skipped\n",
                sentences.len(),
                ex.records.len(),
                ex.skipped.len()
            ))
        }
        Command::Elicit {
            concepts,
            k,
            transcripts,
            offline,
            max_in_flight,
            inflections: inf_path,
            out,
        } => {
            let inf = inflections(inf_path.as_deref())?;
            let templates = PromptTemplate::defaults(k)?;
            let concepts: Vec<ConceptId> = concepts
                .iter()
                .map(|c| c.parse())
                .collect::<Result<_, _>>()?;
            let mut jobs = Vec::new();
            for c in &concepts {
                for t in &templates {
                    jobs.push((c, t.dimension(), render_prompt(t, c)));
                }
            }
            let prompts: Vec<String> = jobs.iter().map(|j| j.2.clone()).collect();
            let cache = TranscriptCache::new(&transcripts);
            let endpoint = if offline {
                None
            } else {
                HttpEndpoint::from_env()
            };
            let opts = FetchOptions {
                offline,
                max_in_flight,
            };
            let got = fetch_all(
                &prompts,
                &cache,
                endpoint.as_ref().map(|e| e as &dyn Endpoint),
                opts,
            )
            .with_context(|| {
                format!(
                    "transcripts in {} (set {} to fetch missing ones)",
                    transcripts.display(),
                    crate::http::URL_VAR
                )
            })?;
            let mut records = Vec::new();
            for ((c, dim, _), t) in jobs.iter().zip(&got) {
                let parsed = parse_candidates(&t.response);
                if parsed.warning {
                    eprintln!("warning: no numbered list in the {dim} response for {c}");
                }
                records.extend(candidates_to_records(
                    c,
                    *dim,
                    &inf.normalize(&parsed.items),
                )?);
            }
            write(&out, &write_records(&records))?;
            emit(&format!(
                "{} prompts, {} records\n",
                prompts.len(),
                records.len()
            ))
        }
        Command::Ingest {
            transcripts,
            concept,
            dimension,
            inflections: inf_path,
            min_vote,
            out,
        } => {
            let concept: ConceptId = concept.parse()?;
            let dimension: PrimitiveRelation = dimension.parse()?;
            let inf = inflections(inf_path.as_deref())?;
            let mut lists = Vec::new();
            for path in &transcripts {
                let t = Transcript::load(path)?;
                let parsed = parse_candidates(&t.response);
                if parsed.warning {
                    eprintln!("warning: no numbered list in {}", path.display());
                }
                lists.push(inf.normalize(&parsed.items));
            }
            let kept = vote(&lists, min_vote);
            let records = candidates_to_records(&concept, dimension, &kept)?;
            write(&out, &write_records(&records))?;
            emit(&format!(
                "{} transcripts, {} records\n",
                transcripts.len(),
                records.len()
            ))
        }
        Command::Build {
            records,
            tau,
            seeds,
            bound,
            dir,
        } => {
            let mut all = Vec::new();
            for path in &records {
                all.extend(
                    read_records(&read(path)?)
                        .with_context(|| format!("records {}", path.display()))?,
                );
            }
            let seeds = match &seeds {
                Some(p) => {
                    LabelSeed::parse(&read(p)?).with_context(|| format!("seeds {}", p.display()))?
                }
                None => LabelSeed::default(),
            };
            let built = build(&all, tau, &seeds, bound)?;
            for w in &built.warnings {
                eprintln!("warning: {w}");
            }
            if !built.residue.is_empty() {
                eprintln!(
                    "warning: {} individual-level records have no kind link and were left out",
                    built.residue.len()
                );
            }
            let store = ProjectStore::create(&dir)?;
            store.save_matrix(&built.matrix)?;
            store.save_lattice(&built.lattice)?;
            emit(&format!(
                "{} concepts, {} property slots, {} types, {} cover edges\n",
                built.matrix.concepts().len(),
                built.matrix.properties().len(),
                built.lattice.len(),
                built.lattice.edges().len()
            ))
        }
        Command::Query {
            dir,
            lexicon: lex_arg,
            json,
            query,
        } => {
            let store = ProjectStore::new(&dir);
            let matrix = store.load_matrix()?;
            let lattice = store.load_lattice()?;
            let lex = lexicon(&lex_arg)?;
            let engine = QueryEngine::new(&matrix, &lattice, &lex);
            let answer = run_query(&engine, &query)?;
            if json {
                emit(&format!(
                    "{}\n",
                    serde_json::to_string_pretty(&answer.json)?
                ))
            } else {
                emit(&answer.text)
            }
        }
        Command::Export {
            lattice,
            format,
            out,
        } => {
            let l = lattice_from_json(&read(&lattice)?)
                .with_context(|| format!("lattice {}", lattice.display()))?;
            let text = match format {
                Format::Dot => lattice_to_dot(&l),
                Format::Json => lattice_to_json(&l),
            };
            match out {
                Some(path) => write(&path, &text),
                None => emit(&text),
            }
        }
        Command::Synth {
            seed,
            records,
            concepts,
            properties,
            out,
        } => {
            if records > concepts.saturating_mul(properties) {
                bail!("{records} distinct records do not fit in {concepts} x {properties} cells");
            }
            write(
                &out,
                &write_records(&synth(seed, records, concepts, properties)?),
            )?;
            emit(&format!(
                "{records} records over {concepts} concepts x {properties} property slots\n"
            ))
        }
    }
}

fn synth(
    seed: u64,
    n: usize,
    concepts: usize,
    properties: usize,
) -> Result<Vec<PredicationRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (ci, pi) = (
            rng.random_range(0..concepts),
            rng.random_range(0..properties),
        );
        if !seen.insert((ci, pi)) {
            continue;
        }
        let slot = ["arg0", "agent", "object"][pi % 3];
        let subject = Subject::Concept(format!("k{ci:04}").parse()?);
        let property: PropertySlot = format!("Q{pi:04}/{slot}").parse()?;
        out.push(PredicationRecord::new(
            subject,
            property,
            rng.random_range(1..=3),
        )?);
    }
    Ok(out)
}

struct Answer {
    text: String,
    json: Value,
}

fn node_json(l: &TypeLattice, i: usize) -> Value {
    let n = l.node(i);
    json!({
        "node": i,
        "labels": n.labels,
        "extent": n.concept.extent.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "intent": n.concept.intent.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

fn path_names(l: &TypeLattice, path: &[usize]) -> Vec<String> {
    path.iter().map(|&i| l.node(i).name().to_string()).collect()
}

fn sensibility_json(l: &TypeLattice, p: &PropertySlot, c: &ConceptId, s: &Sensibility) -> Value {
    json!({
        "property": p.to_string(),
        "concept": c.to_string(),
        "sensible": s.sensible,
        "signature": l.node(s.signature_node).name(),
        "path": path_names(l, &s.path),
    })
}

fn sensibility_text(l: &TypeLattice, p: &PropertySlot, c: &ConceptId, s: &Sensibility) -> String {
    format!(
        "{}\n  {c}: {}\n  {p} is said of {}\n",
        s.sensible,
        path_names(l, &s.path).join(" < "),
        l.node(s.signature_node).name()
    )
}

fn run_query(q: &QueryEngine<'_>, query: &Query) -> Result<Answer> {
    let l = q.lattice();
    Ok(match query {
        Query::Profile { concept } => {
            let prof = q.profile(&concept.parse()?)?;
            let mut text = format!("{}\n", prof.concept);
            let mut obj = serde_json::Map::new();
            obj.insert("concept".into(), json!(prof.concept.to_string()));
            for r in PROFILE_DIMENSIONS {
                let mut nouns: Vec<&str> = prof.bucket(r).iter().map(|t| t.noun()).collect();
                nouns.dedup();
                if nouns.is_empty() {
                    continue;
                }
                text.push_str(&format!("  {:<14}{}\n", r.as_str(), nouns.join(", ")));
                obj.insert(r.as_str().into(), json!(nouns));
            }
            Answer {
                text,
                json: Value::Object(obj),
            }
        }
        Query::Sensible { args } => match &args[..] {
            [p, c] => {
                let (p, c): (PropertySlot, ConceptId) = (p.parse()?, c.parse()?);
                let s = q.is_sensible(&p, &c)?;
                Answer {
                    text: sensibility_text(l, &p, &c, &s),
                    json: sensibility_json(l, &p, &c, &s),
                }
            }
            [pred, a, o] => {
                let (a, o): (ConceptId, ConceptId) = (a.parse()?, o.parse()?);
                let (ok, sa, so) = q.is_sensible_predication(pred, &a, &o)?;
                let pa = PropertySlot::new(pred, ontoforge::Slot::Agent)?;
                let po = PropertySlot::new(pred, ontoforge::Slot::Object)?;
                let text = format!(
                    "{ok}\n{}{}",
                    sensibility_text(l, &pa, &a, &sa)
                        .split_once('\n')
                        .map(|x| x.1)
                        .unwrap_or(""),
                    sensibility_text(l, &po, &o, &so)
                        .split_once('\n')
                        .map(|x| x.1)
                        .unwrap_or("")
                );
                Answer {
                    text,
                    json: json!({
                        "predicate": pred.to_uppercase(),
                        "sensible": ok,
                        "agent": sensibility_json(l, &pa, &a, &sa),
                        "object": sensibility_json(l, &po, &o, &so),
                    }),
                }
            }
            _ => bail!("sensible takes PROPERTY CONCEPT or PREDICATE AGENT OBJECT"),
        },
        Query::Supertype { first, second } => {
            let i = q.common_supertype(&first.parse()?, &second.parse()?)?;
            Answer {
                text: format!("{} (node {i})\n", l.node(i).labels.join(" / ")),
                json: node_json(l, i),
            }
        }
        Query::Signature { property } => {
            let p: PropertySlot = property.parse()?;
            let i = q.signature_type(&p)?;
            let mut j = node_json(l, i);
            j["property"] = json!(p.to_string());
            Answer {
                text: format!("{p}: {} (node {i})\n", l.node(i).labels.join(" / ")),
                json: j,
            }
        }
    })
}
