#!/usr/bin/env python3
"""Independent brute-force computation of the fixture's expected answers.

Reads the raw fixture files (ontology, annotations, symbol map, observation
CSVs) and derives, without any RDF machinery:
  - the set of (gene accession, sample) pairs selected by the
    methylation > 2 / expression > 1 apoptosis query, and
  - the per-sample gene counts of the grouped variant.

Writes expected_counts.json next to the fixtures. Run from this directory.
"""

import csv
import json
from collections import defaultdict

APOPTOSIS = "GO:0006915"


def parse_obo_edges(path):
    """term id -> list of is_a parent ids (non-obsolete terms only)."""
    edges = defaultdict(list)
    current, parents, obsolete, in_term = None, [], False, False
    def flush():
        if in_term and current and not obsolete:
            edges[current].extend(parents)
    with open(path) as fh:
        for raw in fh:
            line = raw.split("!")[0].strip()
            if line.startswith("["):
                flush()
                current, parents, obsolete = None, [], False
                in_term = line == "[Term]"
                continue
            if not in_term or ":" not in line:
                continue
            tag, value = line.split(":", 1)
            value = value.strip()
            if tag == "id":
                current = value
            elif tag == "is_a":
                parents.append(value)
            elif tag == "is_obsolete":
                obsolete = value == "true"
    flush()
    return edges


def ancestors_or_self(term, edges):
    seen, stack = {term}, [term]
    while stack:
        for parent in edges.get(stack.pop(), []):
            if parent not in seen:
                seen.add(parent)
                stack.append(parent)
    return seen


def parse_gaf(path):
    """(symbol, go_id) pairs for process-aspect annotations, NOT-qualified and
    short lines dropped -- mirrors the documented GAF handling."""
    pairs = []
    with open(path) as fh:
        for line in fh:
            if not line.strip() or line.startswith("!"):
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) < 9:
                continue
            if "NOT" in cols[3].split("|"):
                continue
            if cols[8].strip() == "P":
                pairs.append((cols[2].strip(), cols[4].strip()))
    return pairs


def parse_symbols(path):
    table = defaultdict(list)
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            symbol, accessions = line.split("\t")
            for acc in accessions.split(","):
                acc = acc.strip().split(".")[0]
                if acc and acc not in table[symbol]:
                    table[symbol].append(acc)
    return table


def read_values(path):
    """(sample, accession) -> value, one observation per pair in the fixture."""
    values = {}
    with open(path) as fh:
        for row in csv.DictReader(fh):
            key = (row["sample_title"], row["reporter_refseq"])
            assert key not in values, f"duplicate observation {key}"
            values[key] = float(row["value"])
    return values


def main():
    edges = parse_obo_edges("go.obo")
    symbols = parse_symbols("symbols.tsv")

    apoptosis_genes = set()
    for symbol, go_id in parse_gaf("annotations.gaf"):
        if APOPTOSIS in ancestors_or_self(go_id, edges):
            apoptosis_genes.update(symbols.get(symbol, []))

    meth = read_values("methylation.csv")
    expr = read_values("expression.csv")
    samples = sorted({sample for sample, _ in meth})

    pairs = sorted(
        (acc, sample)
        for sample in samples
        for acc in apoptosis_genes
        if meth.get((sample, acc), 0.0) > 2 and expr.get((sample, acc), 0.0) > 1
    )
    counts = defaultdict(int)
    for _, sample in pairs:
        counts[sample] += 1

    result = {
        "apoptosis_genes": sorted(apoptosis_genes),
        "pairs": pairs,
        "counts": {s: counts[s] for s in samples},
    }
    with open("expected_counts.json", "w") as fh:
        json.dump(result, fh, indent=2)
        fh.write("\n")
    print(json.dumps(result["counts"], indent=2))


if __name__ == "__main__":
    main()
