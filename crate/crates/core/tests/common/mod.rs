#![allow(dead_code)]

use std::{
    io::Write,
    path::Path,
    process::{Command, Stdio},
};

use condlint::PatternKind;

/// One snippet per pattern, in catalog order. `bool`/`not(bool)` in the
/// printed snippets become `True`/`False`, missing header colons are
/// restored, and the nested-if body gets a statement.
pub const EXEMPLARS: [(PatternKind, &str); 15] = [
    (
        PatternKind::IfElseReturnBool,
        "if(cond):\n    return True\nelse:\n    return False\n",
    ),
    (
        PatternKind::ConfusingElse,
        "if(cond):\n    a +=1\nelse:\n    if(cond2):\n        b +=1\n    else:\n        c += 1\n",
    ),
    (
        PatternKind::NestedIf,
        "if(cond):\n    if(cond2):\n        a += 1\n",
    ),
    (
        PatternKind::DuplicateIfElseStatement,
        "if(cond):\n    a +=1\n    b +=1\nelse:\n    c += 1\n    b += 1\n",
    ),
    (
        PatternKind::IfReturnBool,
        "if(cond):\n    return True\nreturn False\n",
    ),
    (PatternKind::EmptyIfBody, "if(cond):\n    pass\n"),
    (
        PatternKind::UnnecessaryElif,
        "if(cond):\n    cond += 1\nelif(not(cond)):\n    print(cond)\n",
    ),
    (
        PatternKind::ElseIf,
        "if(cond):\n    cond += 1\nelse:\n    if(not(cond)):\n        print(cond)\n",
    ),
    (
        PatternKind::EmptyElseBody,
        "if(cond):\n    cond += 1\nelse:\n    pass\n",
    ),
    (
        PatternKind::UnnecessaryElse,
        "if(cond):\n    a +=1\n    b +=1\nelse:\n    b += 1\n",
    ),
    (
        PatternKind::SeveralDuplicateIfElseStatements,
        "if(cond):\n    a += 1\n    \n    b += 1\n    print(b)\nelse:\n    c += 1\n    \n    b += 1\n    print(b)\n",
    ),
    (
        PatternKind::IfElseAssignReturn,
        "if(cond):\n    name = a \nelse:\n    name = b\nreturn name\n",
    ),
    (
        PatternKind::DuplicateIfElseBody,
        "if(cond):\n    b +=1\nelse:\n    b += 1\n",
    ),
    (
        PatternKind::IfElseAssignBool,
        "if(cond):\n    name = True\nelse:\n    name = False\n",
    ),
    (
        PatternKind::IfElseAssignBoolReturn,
        "if(cond):\n    name = True\nelse:\n    name = False\nreturn name\n",
    ),
];

pub fn exemplar(kind: PatternKind) -> &'static str {
    EXEMPLARS.iter().find(|(k, _)| *k == kind).unwrap().1
}

/// Indent every non-empty line by `n` spaces.
pub fn indent(text: &str, n: usize) -> String {
    let pad = " ".repeat(n);
    text.lines()
        .map(|l| {
            if l.trim().is_empty() {
                l.to_string()
            } else {
                format!("{pad}{l}")
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

/// A snippet wrapped in its own function.
pub fn wrap(name: &str, snippet: &str) -> String {
    format!(
        "def {name}(cond, cond2, a, b, c, name):\n{}",
        indent(snippet, 4)
    )
}

pub const WORKED_EXAMPLE: &str = "def get_last_letter_dictionary(sentence1):
  sentence1 = sentence1.lower()
  dict1 = {}
  words = list(set(sentence1.split()))
  for i in words:
    if dict1.get(i[-1]):
      dict1[i[-1]].append(i)
    else:
      dict1[i[-1]] = []
      dict1[i[-1]].append(i)
  return dict1
";

pub const WORKED_EXAMPLE_REFACTORED: &str = "def get_last_letter_dictionary(sentence1):
  sentence1 = sentence1.lower()
  dict1 = {}
  words = list(set(sentence1.split()))
  for i in words:
    if not(dict1.get(i[-1])):
      dict1[i[-1]] = []
    dict1[i[-1]].append(i)
  return dict1
";

/// Physical lines holding code, counted without the crate's lexer.
pub fn oracle_lloc(text: &str) -> u64 {
    text.lines()
        .filter(|l| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .count() as u64
}

pub fn write_file(root: &Path, rel: &str, text: &str) {
    let p = root.join(rel);
    std::fs::create_dir_all(p.parent().unwrap()).unwrap();
    std::fs::write(p, text).unwrap();
}

pub fn python_available() -> bool {
    Command::new("python3")
        .arg("--version")
        .output()
        .is_ok_and(|o| o.status.success())
}

/// Run a python3 script with `input` on stdin; returns stdout.
pub fn run_python(script: &str, input: &str) -> Result<String, String> {
    let mut child = Command::new("python3")
        .arg("-c")
        .arg(script)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| format!("python3 unavailable: {e}"))?;
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .map_err(|e| e.to_string())?;
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "python3 failed: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

/// Statement-level `if`/`elif`/`else` keywords per program, found with
/// Python's own tokenizer, plus the keyword behind each `ast.If` node.
/// Input and output are JSON arrays, one entry per program.
pub const KEYWORD_ORACLE: &str = r#"
import ast, io, json, sys, tokenize

def keywords(src):
    ast_tree = ast.parse(src)
    toks = list(tokenize.generate_tokens(io.StringIO(src).readline))
    out = []
    at_start = True
    for t in toks:
        if t.type in (tokenize.NEWLINE, tokenize.INDENT, tokenize.DEDENT):
            at_start = True
            continue
        if t.type in (tokenize.NL, tokenize.COMMENT):
            continue
        if at_start and t.type == tokenize.NAME and t.string in ("if", "elif", "else"):
            out.append([t.start[0], t.string])
        at_start = False
    by_pos = {t.start: t.string for t in toks if t.type == tokenize.NAME}
    ifs = []
    for node in ast.walk(ast_tree):
        if isinstance(node, ast.If):
            ifs.append([node.lineno, by_pos[(node.lineno, node.col_offset)]])
    return {"keywords": sorted(out), "ifs": sorted(ifs)}

print(json.dumps([keywords(s) for s in json.load(sys.stdin)]))
"#;
