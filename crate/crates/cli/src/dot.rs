//! DOT renderings of trellis diagrams.
//!
//! Time runs left to right over columns `0..=n`; column `n` repeats the
//! states of column 0 so the tail-biting wrap is drawn as an ordinary
//! section.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use granule_core::factorize::{AtomicTrellis, SetTrellis};
use granule_core::{Layout, Realization};

/// `3` for a single coordinate, `(1,0)` for several, `0` for none.
pub fn residues_label(r: &[u32]) -> String {
    match r {
        [] => "0".to_owned(),
        [x] => x.to_string(),
        _ => format!("({})", r.iter().map(u32::to_string).collect::<Vec<_>>().join(",")),
    }
}

fn residues_id(r: &[u32]) -> String {
    if r.is_empty() {
        "0".to_owned()
    } else {
        r.iter().map(u32::to_string).collect::<Vec<_>>().join("_")
    }
}

/// Column-grouped layout helper shared by the renderings.
struct Columns<'a> {
    out: &'a mut String,
    prefix: String,
    indent: &'static str,
}

impl Columns<'_> {
    fn node(&self, t: usize, key: &str) -> String {
        format!("{}t{}_{}", self.prefix, t, key)
    }

    fn column(&mut self, t: usize, nodes: &[(String, String)]) {
        write!(self.out, "{}{{ rank=same;", self.indent).unwrap();
        for (key, _) in nodes {
            write!(self.out, " {};", self.node(t, key)).unwrap();
        }
        writeln!(self.out, " }}").unwrap();
        for (key, label) in nodes {
            writeln!(self.out, "{}{} [label=\"{}\"];", self.indent, self.node(t, key), label).unwrap();
        }
    }

    fn edge(&mut self, t: usize, from: &str, to: &str, label: &str) {
        writeln!(
            self.out,
            "{}{} -> {} [label=\"{}\"];",
            self.indent,
            self.node(t, from),
            self.node(t + 1, to),
            label
        )
        .unwrap();
    }
}

const HEADER: &str = "  rankdir=LR;\n  node [shape=circle, fontsize=10];\n  edge [fontsize=10];\n";

/// The trellis diagram of a realization: one node per state of each `S_j`,
/// one edge per branch of each `C_j`, labelled by its symbol.
pub fn trellis_dot(r: &Realization) -> String {
    let n = r.n();
    let mut out = String::new();
    writeln!(out, "digraph trellis {{").unwrap();
    out.push_str(HEADER);
    let mut cols = Columns {
        out: &mut out,
        prefix: "s".into(),
        indent: "  ",
    };
    for t in 0..=n {
        let nodes: Vec<(String, String)> = r
            .state_alphabet(t % n)
            .elements()
            .iter()
            .map(|s| (residues_id(s.residues()), residues_label(s.residues())))
            .collect();
        cols.column(t, &nodes);
    }
    for j in 0..n {
        for branch in r.constraint(j).elements() {
            let (s, a, s_next) = r.split_branch(j, branch);
            cols.edge(j, &residues_id(s), &residues_id(s_next), &residues_label(a));
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

fn atom_cluster(out: &mut String, k: usize, atom: &AtomicTrellis, layout: &Layout) {
    let n = layout.n();
    let f = &atom.fragment;
    writeln!(out, "  subgraph cluster_atom_{k} {{").unwrap();
    writeln!(out, "    label=\"Gamma {f} (order {})\";", atom.order()).unwrap();
    let mut cols = Columns {
        out,
        prefix: format!("a{k}_"),
        indent: "    ",
    };
    for t in 0..=n {
        let nodes: Vec<(String, String)> = (0..atom.state_count(t % n))
            .map(|c| (c.to_string(), c.to_string()))
            .collect();
        cols.column(t, &nodes);
    }
    for j in 0..n {
        let mut edges = BTreeSet::new();
        for c in 0..atom.order() {
            let from = if f.has_edge(j) { c } else { 0 };
            let to = if f.has_edge(j + 1) { c } else { 0 };
            let symbol = residues_label(layout.symbol(atom.granule.representative(c), j));
            edges.insert((from, to, symbol));
        }
        for (from, to, symbol) in edges {
            cols.edge(j, &from.to_string(), &to.to_string(), &symbol);
        }
    }
    writeln!(out, "  }}").unwrap();
}

/// One cluster per atomic trellis, then the aggregate controller canonical
/// realization with states labelled by the state values they produce.
pub fn canonical_dot(ct: &SetTrellis) -> String {
    let n = ct.n();
    let mut out = String::new();
    writeln!(out, "digraph canonical {{").unwrap();
    out.push_str(HEADER);
    for (k, atom) in ct.atoms.iter().enumerate() {
        atom_cluster(&mut out, k, atom, &ct.layout);
    }
    writeln!(out, "  subgraph cluster_aggregate {{").unwrap();
    writeln!(out, "    label=\"aggregate\";").unwrap();
    let mut cols = Columns {
        out: &mut out,
        prefix: "g".into(),
        indent: "    ",
    };
    for t in 0..=n {
        let nodes: Vec<(String, String)> = ct.states[t % n]
            .iter()
            .enumerate()
            .map(|(i, s)| (i.to_string(), residues_label(s.label.residues())))
            .collect();
        cols.column(t, &nodes);
    }
    for (j, list) in ct.branches.iter().enumerate() {
        for b in list {
            cols.edge(
                j,
                &b.from.to_string(),
                &b.to.to_string(),
                &residues_label(b.symbol.residues()),
            );
        }
    }
    writeln!(out, "  }}").unwrap();
    writeln!(out, "}}").unwrap();
    out
}
