//! Serialization of solution tables: SPARQL Query Results JSON and TSV.

use serde_json::{json, Map, Value};

use crate::{vocab, Term};

use super::SolutionTable;

fn term_to_json(term: &Term) -> Value {
    match term {
        Term::Iri(iri) => json!({"type": "uri", "value": iri}),
        Term::Blank(label) => json!({"type": "bnode", "value": label}),
        Term::Literal {
            lexical,
            datatype,
            language,
        } => {
            let mut obj = Map::new();
            obj.insert("type".to_string(), json!("literal"));
            obj.insert("value".to_string(), json!(lexical));
            if let Some(lang) = language {
                obj.insert("xml:lang".to_string(), json!(lang));
            } else if datatype != vocab::XSD_STRING {
                obj.insert("datatype".to_string(), json!(datatype));
            }
            Value::Object(obj)
        }
    }
}

/// SPARQL 1.1 Query Results JSON (`head`/`results.bindings`).
pub fn to_sparql_json(table: &SolutionTable) -> String {
    let bindings: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (name, cell) in table.header.iter().zip(row) {
                if let Some(term) = cell {
                    obj.insert(name.clone(), term_to_json(term));
                }
            }
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "head": {"vars": table.header},
        "results": {"bindings": bindings},
    });
    serde_json::to_string_pretty(&doc).expect("json serialization")
}

/// Tab-separated output: `?var` header row, N-Triples term syntax in cells,
/// empty cell for unbound.
pub fn to_tsv(table: &SolutionTable) -> String {
    let mut out = String::new();
    let header: Vec<String> = table.header.iter().map(|v| format!("?{v}")).collect();
    out.push_str(&header.join("\t"));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|cell| cell.as_ref().map_or(String::new(), Term::to_ntriples))
            .collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> SolutionTable {
        SolutionTable {
            header: vec!["rep".to_string(), "n".to_string()],
            rows: vec![
                vec![
                    Some(Term::iri("http://bio2rdf.org/refseq:NM_000546")),
                    Some(Term::typed_literal("3", vocab::XSD_INTEGER)),
                ],
                vec![Some(Term::literal("plain")), None],
            ],
        }
    }

    #[test]
    fn json_shape() {
        let doc: serde_json::Value = serde_json::from_str(&to_sparql_json(&table())).unwrap();
        assert_eq!(doc["head"]["vars"], json!(["rep", "n"]));
        let bindings = doc["results"]["bindings"].as_array().unwrap();
        assert_eq!(bindings.len(), 2);
        assert_eq!(bindings[0]["rep"]["type"], "uri");
        assert_eq!(
            bindings[0]["n"]["datatype"],
            "http://www.w3.org/2001/XMLSchema#integer"
        );
        // unbound cell omitted, plain literal carries no datatype key
        assert!(bindings[1].get("n").is_none());
        assert!(bindings[1]["rep"].get("datatype").is_none());
    }

    #[test]
    fn tsv_shape() {
        let tsv = to_tsv(&table());
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines[0], "?rep\t?n");
        assert_eq!(
            lines[1],
            "<http://bio2rdf.org/refseq:NM_000546>\t\"3\"^^<http://www.w3.org/2001/XMLSchema#integer>"
        );
        assert_eq!(lines[2], "\"plain\"\t");
    }
}
