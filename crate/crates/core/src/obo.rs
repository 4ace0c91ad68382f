//! OBO 1.2 flat-file parser, limited to the term hierarchy: `[Term]` stanzas
//! with `id:`, `name:`, `namespace:`, `is_a:` and `is_obsolete:` tags.
//! Everything else is counted and ignored.

use std::collections::{BTreeMap, HashMap};

use crate::error::OboError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OboTerm {
    pub id: String,
    pub name: String,
    pub namespace: Option<String>,
    pub is_a_parents: Vec<String>,
    pub is_obsolete: bool,
}

#[derive(Debug, Default)]
pub struct OboOntology {
    /// Terms keyed by CURIE id, in deterministic order.
    pub terms: BTreeMap<String, OboTerm>,
    pub format_version: Option<String>,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct OboWarnings {
    /// Tag lines that were skipped because the tag is outside the subset.
    pub ignored_tags: usize,
    /// Non-`[Term]` stanzas skipped entirely.
    pub ignored_stanzas: usize,
    /// is_a targets referenced by non-obsolete terms but absent from the file.
    pub dangling_references: Vec<String>,
}

pub fn parse_obo(text: &str) -> Result<(OboOntology, OboWarnings), OboError> {
    let mut onto = OboOntology::default();
    let mut warnings = OboWarnings::default();

    #[derive(Default)]
    struct Stanza {
        start_line: usize,
        id: Option<String>,
        name: Option<String>,
        namespace: Option<String>,
        parents: Vec<String>,
        obsolete: bool,
    }

    enum Section {
        Header,
        Term(Stanza),
        Other,
    }

    let mut section = Section::Header;

    let flush = |section: &mut Section, onto: &mut OboOntology| -> Result<(), OboError> {
        if let Section::Term(stanza) = std::mem::replace(section, Section::Other) {
            let id = stanza.id.ok_or(OboError::MissingId {
                line: stanza.start_line,
            })?;
            validate_curie(&id, stanza.start_line)?;
            let mut parents: Vec<String> = Vec::new();
            for p in stanza.parents {
                if p != id && !parents.contains(&p) {
                    parents.push(p);
                }
            }
            onto.terms.insert(
                id.clone(),
                OboTerm {
                    id,
                    name: stanza.name.unwrap_or_default(),
                    namespace: stanza.namespace,
                    is_a_parents: parents,
                    is_obsolete: stanza.obsolete,
                },
            );
        }
        Ok(())
    };

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw_line).trim().to_string();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            flush(&mut section, &mut onto)?;
            if line == "[Term]" {
                section = Section::Term(Stanza {
                    start_line: line_no,
                    ..Stanza::default()
                });
            } else {
                warnings.ignored_stanzas += 1;
                section = Section::Other;
            }
            continue;
        }
        let Some((tag, value)) = line.split_once(':') else {
            return Err(OboError::Syntax {
                line: line_no,
                message: format!("expected 'tag: value', got '{line}'"),
            });
        };
        let value = value.trim();
        match &mut section {
            Section::Header => {
                if tag == "format-version" {
                    onto.format_version = Some(value.to_string());
                }
                // other header tags (date, ontology, ...) are fine to skip silently
            }
            Section::Other => {}
            Section::Term(stanza) => match tag {
                "id" => stanza.id = Some(value.to_string()),
                "name" => stanza.name = Some(value.to_string()),
                "namespace" => stanza.namespace = Some(value.to_string()),
                "is_a" => stanza.parents.push(value.to_string()),
                "is_obsolete" => stanza.obsolete = value == "true",
                _ => warnings.ignored_tags += 1,
            },
        }
    }
    flush(&mut section, &mut onto)?;

    // dangling is_a targets from non-obsolete terms
    let mut dangling: Vec<String> = Vec::new();
    for term in onto.terms.values().filter(|t| !t.is_obsolete) {
        for parent in &term.is_a_parents {
            if !onto.terms.contains_key(parent) && !dangling.contains(parent) {
                dangling.push(parent.clone());
            }
        }
    }
    dangling.sort();
    warnings.dangling_references = dangling;

    check_acyclic(&onto)?;
    Ok((onto, warnings))
}

/// `!` starts a comment unless it is inside a quoted string (the subset we
/// parse never quotes, so a plain scan is enough).
fn strip_comment(line: &str) -> &str {
    match line.find('!') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn validate_curie(id: &str, line: usize) -> Result<(), OboError> {
    let ok = matches!(id.split_once(':'), Some((a, b)) if !a.is_empty() && !b.is_empty());
    if ok {
        Ok(())
    } else {
        Err(OboError::Syntax {
            line,
            message: format!("id '{id}' is not of the form IDSPACE:LOCALID"),
        })
    }
}

/// Rejects cycles in the is_a graph over non-obsolete terms, naming one cycle.
fn check_acyclic(onto: &OboOntology) -> Result<(), OboError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        InProgress,
        Done,
    }
    let mut marks: HashMap<&str, Mark> = HashMap::new();

    for start in onto.terms.values().filter(|t| !t.is_obsolete) {
        if marks.contains_key(start.id.as_str()) {
            continue;
        }
        // iterative DFS with an explicit path for cycle reporting
        let mut path: Vec<&str> = Vec::new();
        let mut stack: Vec<(&str, bool)> = vec![(start.id.as_str(), false)];
        while let Some((id, children_done)) = stack.pop() {
            if children_done {
                marks.insert(id, Mark::Done);
                path.pop();
                continue;
            }
            match marks.get(id) {
                Some(Mark::Done) => continue,
                Some(Mark::InProgress) => {
                    let from = path.iter().position(|&p| p == id).unwrap_or(0);
                    let mut cycle: Vec<&str> = path[from..].to_vec();
                    cycle.push(id);
                    return Err(OboError::Cycle(cycle.join(" -> ")));
                }
                None => {}
            }
            marks.insert(id, Mark::InProgress);
            path.push(id);
            stack.push((id, true));
            if let Some(term) = onto.terms.get(id) {
                if !term.is_obsolete {
                    for parent in &term.is_a_parents {
                        if onto.terms.contains_key(parent.as_str()) {
                            stack.push((parent.as_str(), false));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "format-version: 1.2\ndate: 01:01:2010 12:00\n\n";

    #[test]
    fn apoptosis_stanza() {
        let text = format!(
            "{HEADER}[Term]\nid: GO:0006915\nname: apoptosis\nis_a: GO:0008219 ! cell death\n\n[Term]\nid: GO:0008219\nname: cell death\n"
        );
        let (onto, warnings) = parse_obo(&text).unwrap();
        assert_eq!(onto.terms.len(), 2);
        let term = &onto.terms["GO:0006915"];
        assert_eq!(term.name, "apoptosis");
        assert_eq!(term.is_a_parents, vec!["GO:0008219"]);
        assert!(warnings.dangling_references.is_empty());
    }

    #[test]
    fn header_only_file() {
        let (onto, _) = parse_obo(HEADER).unwrap();
        assert_eq!(onto.terms.len(), 0);
        assert_eq!(onto.format_version.as_deref(), Some("1.2"));
    }

    #[test]
    fn obsolete_term_retained_and_flagged() {
        let text = format!("{HEADER}[Term]\nid: GO:0000001\nname: gone\nis_obsolete: true\n");
        let (onto, _) = parse_obo(&text).unwrap();
        assert!(onto.terms["GO:0000001"].is_obsolete);
    }

    #[test]
    fn missing_id_is_hard_error() {
        let text = format!("{HEADER}[Term]\nname: nameless\n");
        let err = parse_obo(&text).unwrap_err();
        assert_eq!(err, OboError::MissingId { line: 4 });
    }

    #[test]
    fn cycle_is_hard_error() {
        let text = format!(
            "{HEADER}[Term]\nid: GO:0000001\nname: a\nis_a: GO:0000002\n\n[Term]\nid: GO:0000002\nname: b\nis_a: GO:0000001\n"
        );
        match parse_obo(&text).unwrap_err() {
            OboError::Cycle(c) => {
                assert!(c.contains("GO:0000001") && c.contains("GO:0000002"), "{c}")
            }
            other => panic!("expected cycle error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_tags_counted_typedefs_skipped() {
        let text = format!(
            "{HEADER}[Typedef]\nid: part_of\nname: part of\n\n[Term]\nid: GO:0000003\nname: x\nxref: EC:1.1.1.1\nsynonym: \"alt\" EXACT []\n"
        );
        let (onto, warnings) = parse_obo(&text).unwrap();
        assert_eq!(onto.terms.len(), 1);
        assert_eq!(warnings.ignored_stanzas, 1);
        assert_eq!(warnings.ignored_tags, 2);
    }

    #[test]
    fn dangling_reference_is_warned() {
        let text = format!("{HEADER}[Term]\nid: GO:0000004\nname: x\nis_a: GO:9999999\n");
        let (_, warnings) = parse_obo(&text).unwrap();
        assert_eq!(warnings.dangling_references, vec!["GO:9999999".to_string()]);
    }

    #[test]
    fn duplicate_and_self_parents_dropped() {
        let text = format!(
            "{HEADER}[Term]\nid: GO:0000005\nname: x\nis_a: GO:0000006\nis_a: GO:0000006\nis_a: GO:0000005\n\n[Term]\nid: GO:0000006\nname: y\n"
        );
        let (onto, _) = parse_obo(&text).unwrap();
        assert_eq!(onto.terms["GO:0000005"].is_a_parents, vec!["GO:0000006"]);
    }
}
