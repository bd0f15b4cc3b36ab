mod common;

use std::collections::BTreeMap;

use condlint::{
    corpus::{CorpusStats, PrevalenceBasis},
    detect::{detect_all_with, DetectOptions, PatternSet},
    detect_all, parse_module,
    report::{self, ReportFormat},
    syntax::{ExprKind, IfChain, Stmt},
    Diagnostic, Fingerprint, PatternKind, Span,
};
use proptest::prelude::*;
use serde_json::Value;

// Program trees rendered with a chosen layout.

#[derive(Clone, Debug)]
enum Node {
    Simple(&'static str),
    If {
        branches: Vec<(&'static str, Vec<Node>)>,
        tail: Tail,
    },
    Loop(Vec<Node>),
}

#[derive(Clone, Debug)]
enum Tail {
    None,
    Else(Vec<Node>),
    /// `else:` holding a single nested chain.
    ElseIf(Box<Node>),
}

const SIMPLE: &[&str] = &[
    "a += 1",
    "b = a + 2",
    "return True",
    "return False",
    "return x",
    "pass",
    "x = True",
    "x = False",
    "print(a, b)",
    "c = [i for i in a if i]",
    "return not a",
];

const CONDS: &[&str] = &[
    "a",
    "not a",
    "a == b",
    "a != b",
    "x is None",
    "b > 3",
    "not (a < b)",
    "a and b",
];

fn node() -> impl Strategy<Value = Node> {
    let leaf = prop::sample::select(SIMPLE).prop_map(Node::Simple);
    leaf.prop_recursive(4, 40, 4, |inner| {
        let body = prop::collection::vec(inner.clone(), 1..4);
        let cond = prop::sample::select(CONDS);
        prop_oneof![
            (
                prop::collection::vec((cond.clone(), body.clone()), 1..4),
                prop_oneof![
                    Just(Tail::None),
                    body.clone().prop_map(Tail::Else),
                    (cond, body.clone()).prop_map(|(c, b)| Tail::ElseIf(Box::new(Node::If {
                        branches: vec![(c, b)],
                        tail: Tail::None,
                    }))),
                ],
            )
                .prop_map(|(branches, tail)| Node::If { branches, tail }),
            body.prop_map(Node::Loop),
        ]
    })
}

fn program() -> impl Strategy<Value = Vec<Node>> {
    prop::collection::vec(node(), 1..5)
}

#[derive(Clone, Copy)]
struct Layout {
    width: usize,
    comments: bool,
    parens: bool,
}

const PLAIN: Layout = Layout {
    width: 4,
    comments: false,
    parens: false,
};

fn render(nodes: &[Node], layout: Layout) -> String {
    let mut out = String::from("def f(a, b, x):\n");
    block(nodes, 1, layout, &mut out);
    out
}

fn block(nodes: &[Node], depth: usize, layout: Layout, out: &mut String) {
    for n in nodes {
        emit(n, depth, layout, out);
    }
}

fn emit(n: &Node, depth: usize, layout: Layout, out: &mut String) {
    let pad = " ".repeat(layout.width * depth);
    let cond = |c: &str| {
        if layout.parens {
            format!("({c})")
        } else {
            c.to_string()
        }
    };
    if layout.comments {
        out.push_str(&format!("{pad}# note\n\n"));
    }
    match n {
        Node::Simple(s) => out.push_str(&format!("{pad}{s}\n")),
        Node::Loop(body) => {
            out.push_str(&format!("{pad}for i in range(2):\n"));
            block(body, depth + 1, layout, out);
        }
        Node::If { branches, tail } => {
            for (i, (c, body)) in branches.iter().enumerate() {
                let kw = if i == 0 { "if" } else { "elif" };
                out.push_str(&format!("{pad}{kw} {}:\n", cond(c)));
                block(body, depth + 1, layout, out);
            }
            match tail {
                Tail::None => {}
                Tail::Else(body) => {
                    out.push_str(&format!("{pad}else:\n"));
                    block(body, depth + 1, layout, out);
                }
                Tail::ElseIf(chain) => {
                    out.push_str(&format!("{pad}else:\n"));
                    emit(chain, depth + 1, layout, out);
                }
            }
        }
    }
}

fn walk<'a>(body: &'a [Stmt], f: &mut impl FnMut(&'a Stmt)) {
    for s in body {
        f(s);
        for b in s.bodies() {
            walk(b, f);
        }
    }
}

fn chains(body: &[Stmt]) -> Vec<&IfChain> {
    let mut out = Vec::new();
    walk(body, &mut |s| out.extend(s.as_if()));
    out
}

/// Lines of `span`, re-indented to column 1.
fn statement_text(source: &str, span: Span) -> String {
    let lines: Vec<&str> = source.lines().collect();
    let first = lines[span.line_start as usize - 1];
    let prefix = &first[..span.col_start as usize - 1];
    let mut text = String::new();
    for line in &lines[span.line_start as usize - 1..span.line_end as usize] {
        text.push_str(line.strip_prefix(prefix).unwrap_or(line));
        text.push('\n');
    }
    text
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn spans_round_trip_to_fingerprints(nodes in program()) {
        let src = render(&nodes, PLAIN);
        let m = parse_module(&src, "p.py");
        prop_assert!(m.is_valid(), "{:?}", m.parse_errors);
        let mut failures = Vec::new();
        walk(&m.body, &mut |s| {
            let again = parse_module(&statement_text(&src, s.span), "s.py");
            if again.body.len() != 1 || again.body[0].fp != s.fp {
                failures.push(s.span);
            }
            if let Some(chain) = s.as_if() {
                for br in &chain.branches {
                    let text = br.cond.span.slice(&src).unwrap();
                    let again = parse_module(&format!("if {text}:\n    pass\n"), "c.py");
                    let cond = again.body.first().and_then(Stmt::as_if).map(|c| &c.branches[0].cond);
                    if cond.map(|c| &c.fp) != Some(&br.cond.fp) {
                        failures.push(br.cond.span);
                    }
                    if let ExprKind::Compare { lhs, rhs, .. } = &br.cond.kind {
                        for operand in [lhs, rhs] {
                            let text = operand.span.slice(&src).unwrap();
                            if Fingerprint::of_source(text) != operand.fp {
                                failures.push(operand.span);
                            }
                        }
                    }
                }
            }
        });
        prop_assert!(failures.is_empty(), "{failures:?}\n{src}");
    }

    #[test]
    fn parse_and_detect_are_deterministic(nodes in program()) {
        let src = render(&nodes, PLAIN);
        let (a, b) = (parse_module(&src, "p.py"), parse_module(&src, "p.py"));
        prop_assert_eq!(&a.body, &b.body);
        prop_assert_eq!(detect_all(&a).unwrap(), detect_all(&b).unwrap());
    }

    #[test]
    fn layout_does_not_change_fingerprints(nodes in program(), width in 1usize..6) {
        let plain = parse_module(&render(&nodes, PLAIN), "a.py");
        let styled_src = render(&nodes, Layout { width, comments: true, parens: true });
        let styled = parse_module(&styled_src, "b.py");
        prop_assert!(styled.is_valid(), "{:?}\n{styled_src}", styled.parse_errors);
        let fps = |m: &condlint::ParsedModule| m.body.iter().map(|s| s.fp.clone()).collect::<Vec<_>>();
        prop_assert_eq!(fps(&plain), fps(&styled));
        let kinds = |m| detect_all(m).unwrap().into_iter().map(|d| d.pattern).collect::<Vec<_>>();
        prop_assert_eq!(kinds(&plain), kinds(&styled));
    }

    #[test]
    fn elif_provenance_matches_construction(nodes in program()) {
        let src = render(&nodes, PLAIN);
        let m = parse_module(&src, "p.py");
        for chain in chains(&m.body) {
            prop_assert!(!chain.branches[0].is_elif);
            prop_assert!(chain.branches[1..].iter().all(|b| b.is_elif));
            for b in &chain.branches {
                let line = src.lines().nth(b.span.line_start as usize - 1).unwrap().trim_start();
                prop_assert_eq!(b.is_elif, line.starts_with("elif "));
            }
            if let Some(body) = chain.else_body() {
                for s in body {
                    if let Some(inner) = s.as_if() {
                        prop_assert!(!inner.branches[0].is_elif);
                    }
                }
            }
        }
    }

    #[test]
    fn detector_exclusivity_and_localization(nodes in program()) {
        let src = render(&nodes, PLAIN);
        let m = parse_module(&src, "p.py");
        let diags = detect_all(&m).unwrap();
        let dup = [
            PatternKind::DuplicateIfElseBody,
            PatternKind::UnnecessaryElse,
            PatternKind::SeveralDuplicateIfElseStatements,
            PatternKind::DuplicateIfElseStatement,
        ];
        let asg = [
            PatternKind::IfElseAssignBoolReturn,
            PatternKind::IfElseAssignBool,
            PatternKind::IfElseAssignReturn,
        ];
        let mut per_site: BTreeMap<(u32, u32), Vec<PatternKind>> = BTreeMap::new();
        let last_line = src.lines().count() as u32;
        for d in &diags {
            per_site.entry(d.span.start()).or_default().push(d.pattern);
            prop_assert!(d.span.line_end <= last_line);
            let text = d.span.slice(&src).unwrap();
            prop_assert!(text.starts_with("if "), "{text}");
        }
        for kinds in per_site.values() {
            prop_assert!(kinds.iter().filter(|k| dup.contains(k)).count() <= 1);
            prop_assert!(kinds.iter().filter(|k| asg.contains(k)).count() <= 1);
            prop_assert!(
                !(kinds.contains(&PatternKind::ConfusingElse) && kinds.contains(&PatternKind::ElseIf))
            );
        }
    }

    #[test]
    fn pattern_filter_is_a_filtration(
        nodes in program(),
        picked in prop::collection::btree_set(0usize..15, 0..15),
    ) {
        let m = parse_module(&render(&nodes, PLAIN), "p.py");
        let set: PatternSet = picked.iter().map(|&i| PatternKind::ALL[i]).collect();
        let all = detect_all(&m).unwrap();
        let some = detect_all_with(&m, &DetectOptions { suggestions: true, patterns: set }).unwrap();
        let expected: Vec<Diagnostic> = all.into_iter().filter(|d| set.contains(d.pattern)).collect();
        prop_assert_eq!(some, expected);
    }

    #[test]
    fn lloc_bounds(nodes in program(), comments in any::<bool>()) {
        let src = render(&nodes, Layout { comments, ..PLAIN });
        let m = parse_module(&src, "p.py");
        prop_assert_eq!(m.lloc as u64, common::oracle_lloc(&src));
        let mut lines = std::collections::BTreeSet::new();
        walk(&m.body, &mut |s| { lines.insert(s.span.line_start); });
        prop_assert!(m.lloc >= lines.len());
    }
}

// Corpus statistics over arbitrary tallies.

#[derive(Clone, Debug)]
struct FileTally {
    group: usize,
    student: usize,
    lloc: usize,
    found: Vec<usize>,
}

fn tally() -> impl Strategy<Value = FileTally> {
    (
        0usize..3,
        0usize..4,
        1usize..200,
        prop::collection::vec(0usize..15, 0..6),
    )
        .prop_map(|(group, student, lloc, found)| FileTally {
            group,
            student,
            lloc,
            found,
        })
}

fn record(stats: &mut CorpusStats, files: &[FileTally]) {
    for f in files {
        let diags: Vec<Diagnostic> = f
            .found
            .iter()
            .map(|&k| Diagnostic::new(PatternKind::ALL[k], Span::new(1, 1, 1, 1)))
            .collect();
        stats.record(
            &format!("g{}", f.group),
            &format!("s{}", f.student),
            f.lloc,
            &diags,
        );
    }
}

fn build(files: &[FileTally], basis: PrevalenceBasis) -> CorpusStats {
    let mut s = CorpusStats::new(basis);
    record(&mut s, files);
    s
}

fn basis() -> impl Strategy<Value = PrevalenceBasis> {
    prop_oneof![
        Just(PrevalenceBasis::Occurrences),
        Just(PrevalenceBasis::Submissions)
    ]
}

proptest! {
    #[test]
    fn stats_ignore_file_order(
        files in prop::collection::vec(tally(), 0..30).prop_shuffle(),
        seed in any::<u64>(),
    ) {
        let mut shuffled = files.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            shuffled.swap(i, (seed as usize ^ i.wrapping_mul(2654435761)) % (i + 1));
        }
        prop_assert_eq!(build(&files, PrevalenceBasis::Occurrences), build(&shuffled, PrevalenceBasis::Occurrences));
    }

    #[test]
    fn merging_halves_equals_whole(files in prop::collection::vec(tally(), 0..30), cut in 0usize..30) {
        let cut = cut.min(files.len());
        let mut left = build(&files[..cut], PrevalenceBasis::Occurrences);
        left.merge(&build(&files[cut..], PrevalenceBasis::Occurrences));
        prop_assert_eq!(left, build(&files, PrevalenceBasis::Occurrences));
    }

    #[test]
    fn cell_invariants(files in prop::collection::vec(tally(), 1..30), basis in basis()) {
        let stats = build(&files, basis);
        for g in stats.groups() {
            let mut share = 0.0;
            for k in PatternKind::ALL {
                prop_assert!(stats.students(g, k) <= stats.submissions_with(g, k));
                prop_assert!(stats.submissions_with(g, k) <= stats.count(g, k));
                share += stats.prevalence(g, k);
            }
            if PatternKind::ALL.iter().any(|&k| stats.basis_count(g, k) > 0) {
                prop_assert!((share - 1.0).abs() < 1e-9, "{g}: {share}");
            }
        }
        let bars = report::totals_bar_data(&stats);
        prop_assert!(bars.windows(2).all(|w| w[0].1 >= w[1].1));
        if stats.total_diagnostics() > 0 {
            let sum: f64 = bars.iter().map(|b| b.1).sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn reports_round_trip_counts(files in prop::collection::vec(tally(), 1..30)) {
        let stats = build(&files, PrevalenceBasis::Occurrences);

        let csv_text = report::emit_prevalence_matrix(&stats, ReportFormat::Csv);
        let mut rd = csv::Reader::from_reader(csv_text.as_bytes());
        let mut pct_sums: BTreeMap<String, (f64, usize)> = BTreeMap::new();
        for rec in rd.records() {
            let rec = rec.unwrap();
            let k: PatternKind = rec[0].parse().unwrap();
            let g = &rec[1];
            let n: u64 = rec[2].parse().unwrap();
            if g == "Total" {
                prop_assert_eq!(n, stats.pattern_total(k));
                prop_assert_eq!(rec[3].parse::<u64>().unwrap(), stats.unique_students_total(k));
            } else {
                prop_assert_eq!(n, stats.count(g, k));
                prop_assert_eq!(rec[3].parse::<u64>().unwrap(), stats.students(g, k));
                prop_assert_eq!(rec[4].parse::<u64>().unwrap(), stats.submissions_with(g, k));
            }
            let pct: f64 = rec[5].parse().unwrap();
            let e = pct_sums.entry(g.to_string()).or_default();
            e.0 += pct;
            e.1 += (n > 0) as usize;
        }
        for (g, (sum, nonzero)) in pct_sums {
            if nonzero > 0 {
                // Each rounded cell is off by at most 0.05.
                prop_assert!((sum - 100.0).abs() <= 0.05 * nonzero as f64 + 1e-9, "{g}: {sum}");
            }
        }

        let v: Value = serde_json::from_str(&report::emit_prevalence_matrix(&stats, ReportFormat::Json)).unwrap();
        for row in v["rows"].as_array().unwrap() {
            let k: PatternKind = row["pattern"].as_str().unwrap().parse().unwrap();
            for cell in row["cells"].as_array().unwrap() {
                let g = cell["group"].as_str().unwrap();
                prop_assert_eq!(cell["count"].as_u64().unwrap(), stats.count(g, k));
                prop_assert_eq!(cell["unique_students"].as_u64().unwrap(), stats.students(g, k));
            }
            prop_assert_eq!(row["total"]["count"].as_u64().unwrap(), stats.pattern_total(k));
        }
        for g in v["groups"].as_array().unwrap() {
            let name = g["group"].as_str().unwrap();
            prop_assert_eq!(g["lloc"].as_u64().unwrap(), stats.lloc(name));
        }
    }
}
