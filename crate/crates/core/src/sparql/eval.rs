use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::QueryError;
use crate::graph::TermId;
use crate::{vocab, Graph, Term, Triple};

use super::{
    plan_bgp, FilterExpr, PatternTerm, Projection, QueryAst, QueryForm, SelectQuery, TriplePattern,
};

/// Bindings table produced by SELECT evaluation. Row order is canonical
/// (sorted by serialized cell values) so identical queries over identical
/// graphs always produce identical output bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<Term>>>,
}

struct VarRegistry {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VarRegistry {
    fn from_patterns(patterns: &[TriplePattern]) -> VarRegistry {
        let mut reg = VarRegistry {
            names: Vec::new(),
            index: HashMap::new(),
        };
        for pattern in patterns {
            for v in pattern.variables() {
                if !reg.index.contains_key(v) {
                    reg.index.insert(v.to_string(), reg.names.len());
                    reg.names.push(v.to_string());
                }
            }
        }
        reg
    }

    fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

/// Joins the basic graph pattern in planner order, applying each numeric
/// filter as soon as its variable is bound. Returns full binding rows over
/// the pattern variables.
fn evaluate_bgp(
    graph: &Graph,
    patterns: &[TriplePattern],
    filters: &[FilterExpr],
    registry: &VarRegistry,
) -> Vec<Vec<Option<TermId>>> {
    let mut rows: Vec<Vec<Option<TermId>>> = vec![vec![None; registry.names.len()]];
    let mut filters_left: Vec<&FilterExpr> = filters.iter().collect();
    let mut bound: HashSet<&str> = HashSet::new();

    let apply_ready_filters = |rows: &mut Vec<Vec<Option<TermId>>>,
                                   filters_left: &mut Vec<&FilterExpr>,
                                   bound: &HashSet<&str>| {
        filters_left.retain(|filter| {
            if !bound.contains(filter.variable.as_str()) {
                return true;
            }
            let slot = registry.get(&filter.variable).expect("bound var registered");
            rows.retain(|row| {
                row[slot]
                    .and_then(|id| graph.term(id).numeric_value())
                    .is_some_and(|v| filter.comparator.test(v, filter.constant))
            });
            false
        });
    };

    for &idx in &plan_bgp(patterns, graph) {
        let pattern = &patterns[idx];
        let mut next: Vec<Vec<Option<TermId>>> = Vec::new();
        // constant positions resolve once; absent constants match nothing
        let resolve_const = |t: &PatternTerm| -> Result<Option<TermId>, ()> {
            match t {
                PatternTerm::Term(term) => graph.lookup(term).map(Some).ok_or(()),
                PatternTerm::Var(_) => Ok(None),
            }
        };
        let consts = (
            resolve_const(&pattern.subject),
            resolve_const(&pattern.predicate),
            resolve_const(&pattern.object),
        );
        let (Ok(cs), Ok(cp), Ok(co)) = consts else {
            rows.clear();
            break;
        };
        let slot = |t: &PatternTerm| t.as_var().and_then(|v| registry.get(v));
        let (vs, vp, vo) = (slot(&pattern.subject), slot(&pattern.predicate), slot(&pattern.object));

        for row in &rows {
            let lookup = |c: Option<TermId>, v: Option<usize>| c.or_else(|| v.and_then(|i| row[i]));
            let (s, p, o) = (lookup(cs, vs), lookup(cp, vp), lookup(co, vo));
            for [ms, mp, mo] in graph.match_ids(s, p, o) {
                let mut new_row = row.clone();
                let mut ok = true;
                for (var_slot, value) in [(vs, ms), (vp, mp), (vo, mo)] {
                    if let Some(i) = var_slot {
                        match new_row[i] {
                            None => new_row[i] = Some(value),
                            Some(existing) if existing == value => {}
                            Some(_) => {
                                ok = false;
                                break;
                            }
                        }
                    }
                }
                if ok {
                    next.push(new_row);
                }
            }
        }
        rows = next;
        bound.extend(pattern.variables());
        apply_ready_filters(&mut rows, &mut filters_left, &bound);
        if rows.is_empty() {
            break;
        }
    }

    // filters whose variable never occurs in a pattern eliminate every row
    // (error-as-false semantics on an unbound operand)
    if !filters_left.is_empty() {
        rows.clear();
    }
    rows
}

pub fn evaluate_select(graph: &Graph, ast: &QueryAst) -> Result<SolutionTable, QueryError> {
    let QueryForm::Select(select) = &ast.form else {
        return Err(QueryError::Invalid(
            "evaluate_select requires a SELECT query".to_string(),
        ));
    };
    let registry = VarRegistry::from_patterns(&ast.patterns);
    let rows = evaluate_bgp(graph, &ast.patterns, &ast.filters, &registry);

    let has_aggregate = select
        .projection
        .iter()
        .any(|p| matches!(p, Projection::Count { .. }));

    let mut table = if has_aggregate {
        aggregate(graph, select, &registry, rows)
    } else {
        project(graph, select, &registry, rows)
    };

    if select.distinct {
        let mut seen = HashSet::new();
        table.rows.retain(|row| seen.insert(row.clone()));
    }
    canonical_sort(&mut table.rows);
    Ok(table)
}

fn project(
    graph: &Graph,
    select: &SelectQuery,
    registry: &VarRegistry,
    rows: Vec<Vec<Option<TermId>>>,
) -> SolutionTable {
    let header: Vec<String> = select
        .projection
        .iter()
        .map(|p| match p {
            Projection::Var(v) => v.clone(),
            Projection::Count { alias, .. } => alias.clone(),
        })
        .collect();
    let slots: Vec<Option<usize>> = select
        .projection
        .iter()
        .map(|p| match p {
            Projection::Var(v) => registry.get(v),
            Projection::Count { .. } => None,
        })
        .collect();
    let rows = rows
        .into_iter()
        .map(|row| {
            slots
                .iter()
                .map(|slot| slot.and_then(|i| row[i]).map(|id| graph.term(id).clone()))
                .collect()
        })
        .collect();
    SolutionTable { header, rows }
}

fn aggregate(
    graph: &Graph,
    select: &SelectQuery,
    registry: &VarRegistry,
    rows: Vec<Vec<Option<TermId>>>,
) -> SolutionTable {
    let group_slots: Vec<Option<usize>> =
        select.group_by.iter().map(|v| registry.get(v)).collect();

    // group key -> rows, insertion-ordered by BTreeMap over ids for determinism
    let mut groups: BTreeMap<Vec<Option<TermId>>, Vec<Vec<Option<TermId>>>> = BTreeMap::new();
    for row in rows {
        let key: Vec<Option<TermId>> = group_slots
            .iter()
            .map(|slot| slot.and_then(|i| row[i]))
            .collect();
        groups.entry(key).or_default().push(row);
    }

    let header: Vec<String> = select
        .projection
        .iter()
        .map(|p| match p {
            Projection::Var(v) => v.clone(),
            Projection::Count { alias, .. } => alias.clone(),
        })
        .collect();

    let mut out_rows = Vec::new();
    for (key, members) in groups {
        let mut row: Vec<Option<Term>> = Vec::with_capacity(select.projection.len());
        for p in &select.projection {
            match p {
                Projection::Var(v) => {
                    let pos = select.group_by.iter().position(|g| g == v);
                    let id = pos.and_then(|i| key[i]);
                    row.push(id.map(|id| graph.term(id).clone()));
                }
                Projection::Count { distinct, variable, .. } => {
                    let slot = registry.get(variable);
                    let count = match slot {
                        None => 0,
                        Some(i) => {
                            if *distinct {
                                members
                                    .iter()
                                    .filter_map(|r| r[i])
                                    .collect::<HashSet<_>>()
                                    .len()
                            } else {
                                members.iter().filter(|r| r[i].is_some()).count()
                            }
                        }
                    };
                    row.push(Some(Term::typed_literal(
                        count.to_string(),
                        vocab::XSD_INTEGER,
                    )));
                }
            }
        }
        out_rows.push(row);
    }
    SolutionTable {
        header,
        rows: out_rows,
    }
}

fn canonical_sort(rows: &mut [Vec<Option<Term>>]) {
    rows.sort_by_cached_key(|row| {
        row.iter()
            .map(|cell| cell.as_ref().map_or(String::new(), Term::to_ntriples))
            .collect::<Vec<_>>()
    });
}

/// DESCRIBE: every term bound to a described variable in any solution is
/// described by its concise bounded description (all triples with the term as
/// subject, following blank-node objects recursively).
pub fn evaluate_describe(graph: &Graph, ast: &QueryAst) -> Result<Graph, QueryError> {
    let QueryForm::Describe { variables } = &ast.form else {
        return Err(QueryError::Invalid(
            "evaluate_describe requires a DESCRIBE query".to_string(),
        ));
    };
    let registry = VarRegistry::from_patterns(&ast.patterns);
    let rows = evaluate_bgp(graph, &ast.patterns, &ast.filters, &registry);

    let mut described: HashSet<TermId> = HashSet::new();
    for row in &rows {
        for v in variables {
            if let Some(id) = registry.get(v).and_then(|i| row[i]) {
                described.insert(id);
            }
        }
    }

    let mut out = Graph::new();
    let mut visited: HashSet<TermId> = HashSet::new();
    let mut stack: Vec<TermId> = described.into_iter().collect();
    while let Some(subject) = stack.pop() {
        if !visited.insert(subject) {
            continue;
        }
        for [s, p, o] in graph.match_ids(Some(subject), None, None) {
            out.insert(&Triple {
                subject: graph.term(s).clone(),
                predicate: graph.term(p).clone(),
                object: graph.term(o).clone(),
            });
            if graph.term(o).is_blank() {
                stack.push(o);
            }
        }
    }
    Ok(out)
}
