use std::collections::{HashMap, HashSet};

use crate::{RdfError, Term, Triple};

/// Interned handle for a [`Term`]. Handles are only meaningful within the
/// graph that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(pub(crate) u32);

#[derive(Debug, Default)]
struct Interner {
    terms: Vec<Term>,
    ids: HashMap<Term, u32>,
}

impl Interner {
    fn intern(&mut self, term: &Term) -> TermId {
        if let Some(&id) = self.ids.get(term) {
            return TermId(id);
        }
        let id = self.terms.len() as u32;
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        TermId(id)
    }

    fn lookup(&self, term: &Term) -> Option<TermId> {
        self.ids.get(term).map(|&id| TermId(id))
    }

    fn term(&self, id: TermId) -> &Term {
        &self.terms[id.0 as usize]
    }
}

type NestedIndex = HashMap<u32, HashMap<u32, Vec<u32>>>;

/// Result of merging one graph into another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeReport {
    /// Triples actually added (duplicates excluded).
    pub added: usize,
    /// IRIs that appeared in subject position in both inputs before the merge.
    pub shared_subjects: usize,
}

/// In-memory RDF graph with interned terms and SPO/POS/OSP indexes.
///
/// Build single-threaded, then share `&Graph` freely across reader threads.
#[derive(Debug, Default)]
pub struct Graph {
    interner: Interner,
    triples: Vec<[u32; 3]>,
    present: HashSet<[u32; 3]>,
    spo: NestedIndex,
    pos: NestedIndex,
    osp: NestedIndex,
    prefixes: HashMap<String, String>,
    blank_seq: u64,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn intern(&mut self, term: &Term) -> TermId {
        self.interner.intern(term)
    }

    pub fn lookup(&self, term: &Term) -> Option<TermId> {
        self.interner.lookup(term)
    }

    pub fn term(&self, id: TermId) -> &Term {
        self.interner.term(id)
    }

    /// Inserts a statement; returns true iff it was not already present.
    pub fn insert(&mut self, triple: &Triple) -> bool {
        let s = self.interner.intern(&triple.subject).0;
        let p = self.interner.intern(&triple.predicate).0;
        let o = self.interner.intern(&triple.object).0;
        self.insert_ids([s, p, o])
    }

    /// Validating insert from raw terms.
    pub fn insert_terms(&mut self, s: Term, p: Term, o: Term) -> Result<bool, RdfError> {
        let t = Triple::new(s, p, o)?;
        Ok(self.insert(&t))
    }

    fn insert_ids(&mut self, key: [u32; 3]) -> bool {
        if !self.present.insert(key) {
            return false;
        }
        let [s, p, o] = key;
        self.triples.push(key);
        self.spo.entry(s).or_default().entry(p).or_default().push(o);
        self.pos.entry(p).or_default().entry(o).or_default().push(s);
        self.osp.entry(o).or_default().entry(s).or_default().push(p);
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        let (Some(s), Some(p), Some(o)) = (
            self.interner.lookup(&triple.subject),
            self.interner.lookup(&triple.predicate),
            self.interner.lookup(&triple.object),
        ) else {
            return false;
        };
        self.present.contains(&[s.0, p.0, o.0])
    }

    /// All statements matching the bound positions, as interned id triples.
    /// Order is unspecified but stable for an unmutated graph.
    pub fn match_ids(
        &self,
        s: Option<TermId>,
        p: Option<TermId>,
        o: Option<TermId>,
    ) -> Vec<[TermId; 3]> {
        let mut out = Vec::new();
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                if self.present.contains(&[s.0, p.0, o.0]) {
                    out.push([s, p, o]);
                }
            }
            (Some(s), Some(p), None) => {
                if let Some(objects) = self.spo.get(&s.0).and_then(|m| m.get(&p.0)) {
                    out.extend(objects.iter().map(|&o| [s, p, TermId(o)]));
                }
            }
            (None, Some(p), Some(o)) => {
                if let Some(subjects) = self.pos.get(&p.0).and_then(|m| m.get(&o.0)) {
                    out.extend(subjects.iter().map(|&s| [TermId(s), p, o]));
                }
            }
            (Some(s), None, Some(o)) => {
                if let Some(preds) = self.osp.get(&o.0).and_then(|m| m.get(&s.0)) {
                    out.extend(preds.iter().map(|&p| [s, TermId(p), o]));
                }
            }
            (Some(s), None, None) => {
                if let Some(by_pred) = self.spo.get(&s.0) {
                    for (&p, objects) in by_pred {
                        out.extend(objects.iter().map(|&o| [s, TermId(p), TermId(o)]));
                    }
                }
            }
            (None, Some(p), None) => {
                if let Some(by_obj) = self.pos.get(&p.0) {
                    for (&o, subjects) in by_obj {
                        out.extend(subjects.iter().map(|&s| [TermId(s), p, TermId(o)]));
                    }
                }
            }
            (None, None, Some(o)) => {
                if let Some(by_subj) = self.osp.get(&o.0) {
                    for (&s, preds) in by_subj {
                        out.extend(preds.iter().map(|&p| [TermId(s), TermId(p), o]));
                    }
                }
            }
            (None, None, None) => {
                out.extend(
                    self.triples
                        .iter()
                        .map(|&[s, p, o]| [TermId(s), TermId(p), TermId(o)]),
                );
            }
        }
        out
    }

    /// Term-level match. Positions given as `None` are wildcards. A bound term
    /// absent from the graph matches nothing.
    pub fn match_terms(
        &self,
        s: Option<&Term>,
        p: Option<&Term>,
        o: Option<&Term>,
    ) -> Vec<Triple> {
        let lookup = |t: Option<&Term>| -> Result<Option<TermId>, ()> {
            match t {
                None => Ok(None),
                Some(t) => self.interner.lookup(t).map(Some).ok_or(()),
            }
        };
        let (Ok(s), Ok(p), Ok(o)) = (lookup(s), lookup(p), lookup(o)) else {
            return Vec::new();
        };
        self.match_ids(s, p, o)
            .into_iter()
            .map(|[s, p, o]| Triple {
                subject: self.term(s).clone(),
                predicate: self.term(p).clone(),
                object: self.term(o).clone(),
            })
            .collect()
    }

    /// Number of statements matching the bound positions, without
    /// materializing them. Used for join-order estimates.
    pub fn count_matching(
        &self,
        s: Option<TermId>,
        p: Option<TermId>,
        o: Option<TermId>,
    ) -> usize {
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => usize::from(self.present.contains(&[s.0, p.0, o.0])),
            (Some(s), Some(p), None) => self
                .spo
                .get(&s.0)
                .and_then(|m| m.get(&p.0))
                .map_or(0, Vec::len),
            (None, Some(p), Some(o)) => self
                .pos
                .get(&p.0)
                .and_then(|m| m.get(&o.0))
                .map_or(0, Vec::len),
            (Some(s), None, Some(o)) => self
                .osp
                .get(&o.0)
                .and_then(|m| m.get(&s.0))
                .map_or(0, Vec::len),
            (Some(s), None, None) => self
                .spo
                .get(&s.0)
                .map_or(0, |m| m.values().map(Vec::len).sum()),
            (None, Some(p), None) => self
                .pos
                .get(&p.0)
                .map_or(0, |m| m.values().map(Vec::len).sum()),
            (None, None, Some(o)) => self
                .osp
                .get(&o.0)
                .map_or(0, |m| m.values().map(Vec::len).sum()),
            (None, None, None) => self.triples.len(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.triples.iter().map(move |&[s, p, o]| Triple {
            subject: self.term(TermId(s)).clone(),
            predicate: self.term(TermId(p)).clone(),
            object: self.term(TermId(o)).clone(),
        })
    }

    /// Set-unions `source` into self. Blank nodes from `source` are renamed
    /// apart (standard RDF merge); ground triples deduplicate.
    pub fn merge(&mut self, source: &Graph) -> MergeReport {
        let shared_subjects = {
            let own: HashSet<&str> = self.subject_iris().collect();
            source
                .subject_iris()
                .collect::<HashSet<&str>>()
                .iter()
                .filter(|iri| own.contains(*iri))
                .count()
        };

        let mut blank_map: HashMap<String, Term> = HashMap::new();
        let mut added = 0;
        for [s, p, o] in &source.triples {
            let map_term = |g: &mut Graph, blank_map: &mut HashMap<String, Term>, t: &Term| -> Term {
                if let Term::Blank(label) = t {
                    blank_map
                        .entry(label.clone())
                        .or_insert_with(|| {
                            g.blank_seq += 1;
                            Term::Blank(format!("m{}", g.blank_seq))
                        })
                        .clone()
                } else {
                    t.clone()
                }
            };
            let subject = map_term(self, &mut blank_map, source.term(TermId(*s)));
            let object = map_term(self, &mut blank_map, source.term(TermId(*o)));
            let predicate = source.term(TermId(*p)).clone();
            let key = [
                self.interner.intern(&subject).0,
                self.interner.intern(&predicate).0,
                self.interner.intern(&object).0,
            ];
            if self.insert_ids(key) {
                added += 1;
            }
        }

        for (prefix, ns) in &source.prefixes {
            self.prefixes
                .entry(prefix.clone())
                .or_insert_with(|| ns.clone());
        }

        MergeReport {
            added,
            shared_subjects,
        }
    }

    fn subject_iris(&self) -> impl Iterator<Item = &str> + '_ {
        self.spo.keys().filter_map(move |&s| match self.term(TermId(s)) {
            Term::Iri(iri) => Some(iri.as_str()),
            _ => None,
        })
    }

    pub fn register_prefix(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        self.prefixes.insert(prefix.into(), namespace.into());
    }

    pub fn prefixes(&self) -> &HashMap<String, String> {
        &self.prefixes
    }

    /// Expands `prefix:local` against the registered prefix map.
    pub fn expand_qname(&self, qname: &str) -> Result<Term, RdfError> {
        expand_qname(&self.prefixes, qname)
    }
}

/// Expands a qname against an explicit prefix map.
pub fn expand_qname(prefixes: &HashMap<String, String>, qname: &str) -> Result<Term, RdfError> {
    let (prefix, local) = qname
        .split_once(':')
        .ok_or_else(|| RdfError::MalformedQName(qname.to_string()))?;
    let ns = prefixes
        .get(prefix)
        .ok_or_else(|| RdfError::UnknownPrefix(prefix.to_string()))?;
    Ok(Term::Iri(format!("{ns}{local}")))
}
