//! Line-based rule files.
//!
//! ```text
//! # comment
//! kind = block
//! factor = 2
//! alphabet = 0 1 2 3
//! 0 ->
//!   1 0
//!   0 3
//! ...
//! ```
//!
//! Word rules put the image on the same line: `a -> a b`.

use std::fmt::Write as _;

use super::{Kind, Label, SubstError, SubstitutionSystem};

struct Line<'a> {
    number: usize,
    indented: bool,
    text: &'a str,
}

fn syntax(line: usize, message: impl Into<String>) -> SubstError {
    SubstError::Syntax {
        line,
        message: message.into(),
    }
}

pub fn parse_rules(text: &str) -> Result<SubstitutionSystem, SubstError> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                return None;
            }
            Some(Line {
                number: i + 1,
                indented: raw.starts_with(|c: char| c.is_whitespace()),
                text: trimmed,
            })
        })
        .collect();

    let mut kind = None;
    let mut factor = None;
    let mut alphabet: Option<Vec<String>> = None;
    let mut idx = 0;

    while idx < lines.len() && !lines[idx].text.contains("->") {
        let line = &lines[idx];
        let (key, value) = line
            .text
            .split_once('=')
            .ok_or_else(|| syntax(line.number, "expected `key = value` header line"))?;
        let value = value.trim();
        match key.trim() {
            "kind" => {
                kind = Some(match value {
                    "word" => Kind::Word,
                    "block" => Kind::Block,
                    other => {
                        return Err(syntax(
                            line.number,
                            format!("unknown kind `{other}`, expected `word` or `block`"),
                        ))
                    }
                })
            }
            "factor" => {
                factor = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| syntax(line.number, format!("invalid factor `{value}`")))?,
                )
            }
            "alphabet" => alphabet = Some(value.split_whitespace().map(str::to_owned).collect()),
            other => return Err(syntax(line.number, format!("unknown header key `{other}`"))),
        }
        idx += 1;
    }

    let next_line = lines.get(idx).map_or(text.lines().count() + 1, |l| l.number);
    let kind = kind.ok_or_else(|| syntax(next_line, "missing `kind` header"))?;
    let factor = factor.ok_or_else(|| syntax(next_line, "missing `factor` header"))?;
    let alphabet = alphabet.ok_or_else(|| syntax(next_line, "missing `alphabet` header"))?;
    if factor < 2 {
        return Err(SubstError::FactorTooSmall(factor));
    }
    if alphabet.is_empty() || alphabet.len() > super::MAX_ALPHABET {
        return Err(SubstError::AlphabetSize(alphabet.len()));
    }
    let lookup = |rule: &str, name: &str| -> Result<Label, SubstError> {
        alphabet
            .iter()
            .position(|a| a == name)
            .map(|i| i as Label)
            .ok_or_else(|| SubstError::UnknownLabel {
                rule: rule.to_owned(),
                label: name.to_owned(),
            })
    };

    let mut rules: Vec<Option<Vec<Label>>> = vec![None; alphabet.len()];
    while idx < lines.len() {
        let line = &lines[idx];
        let (lhs, rhs) = line
            .text
            .split_once("->")
            .ok_or_else(|| syntax(line.number, "expected a rule `label -> ...`"))?;
        let lhs = lhs.trim();
        if lhs.is_empty() || lhs.contains(char::is_whitespace) {
            return Err(syntax(line.number, "rule must start with a single label"));
        }
        let slot = lookup(lhs, lhs)? as usize;
        if rules[slot].is_some() {
            return Err(SubstError::DuplicateRule(lhs.to_owned()));
        }
        idx += 1;
        let image = match kind {
            Kind::Word => {
                let image = rhs
                    .split_whitespace()
                    .map(|t| lookup(lhs, t))
                    .collect::<Result<Vec<_>, _>>()?;
                if image.len() != factor {
                    return Err(SubstError::NonConstantLength {
                        rule: lhs.to_owned(),
                        expected: factor,
                        found: image.len(),
                    });
                }
                image
            }
            Kind::Block => {
                if !rhs.trim().is_empty() {
                    return Err(syntax(
                        line.number,
                        "block images go on the following indented lines",
                    ));
                }
                let mut image = Vec::with_capacity(factor * factor);
                let rows = lines[idx..]
                    .iter()
                    .take_while(|l| l.indented && !l.text.contains("->"))
                    .take(factor + 1)
                    .collect::<Vec<_>>();
                if rows.len() != factor {
                    return Err(SubstError::RaggedBlock {
                        rule: lhs.to_owned(),
                        detail: format!("{} rows, expected {factor}", rows.len()),
                    });
                }
                for row in &rows {
                    let cells = row
                        .text
                        .split_whitespace()
                        .map(|t| lookup(lhs, t))
                        .collect::<Result<Vec<_>, _>>()?;
                    if cells.len() != factor {
                        return Err(SubstError::RaggedBlock {
                            rule: lhs.to_owned(),
                            detail: format!(
                                "line {} has {} cells, expected {factor}",
                                row.number,
                                cells.len()
                            ),
                        });
                    }
                    image.extend(cells);
                }
                idx += rows.len();
                image
            }
        };
        rules[slot] = Some(image);
    }

    let rules = rules
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or_else(|| SubstError::MissingRule(alphabet[i].clone())))
        .collect::<Result<Vec<_>, _>>()?;
    SubstitutionSystem::new(alphabet, kind, factor, rules)
}

/// Inverse of [`parse_rules`].
pub fn render_rules(system: &SubstitutionSystem) -> String {
    let names = system.alphabet();
    let join = |cells: &[Label]| {
        cells
            .iter()
            .map(|&l| names[l as usize].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    let kind = match system.kind() {
        Kind::Word => "word",
        Kind::Block => "block",
    };
    let _ = writeln!(out, "kind = {kind}");
    let _ = writeln!(out, "factor = {}", system.factor());
    let _ = writeln!(out, "alphabet = {}", names.join(" "));
    for (label, name) in names.iter().enumerate() {
        let image = system.rule(label as Label);
        match system.kind() {
            Kind::Word => {
                let _ = writeln!(out, "{name} -> {}", join(image));
            }
            Kind::Block => {
                let _ = writeln!(out, "{name} ->");
                for row in image.chunks(system.factor()) {
                    let _ = writeln!(out, "  {}", join(row));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_period_doubling() {
        let s = parse_rules("kind = word\nfactor = 2\nalphabet = a b\na -> a b\nb -> a a\n").unwrap();
        assert_eq!(s.kind(), Kind::Word);
        assert_eq!(s.factor(), 2);
        assert_eq!(s.rule(0), &[0, 1]);
        assert_eq!(s.rule(1), &[0, 0]);
    }

    #[test]
    fn parses_chair() {
        let s = parse_rules(super::super::builtin::CHAIR_RULES).unwrap();
        assert_eq!(s.kind(), Kind::Block);
        assert_eq!(s.alphabet().len(), 4);
        assert_eq!(s.rule(0), &[1, 0, 0, 3]);
        assert_eq!(s.rule(3), &[3, 2, 0, 3]);
    }

    #[test]
    fn rejects_non_constant_length() {
        let err = parse_rules("kind = word\nfactor = 2\nalphabet = a b\na -> a b a\nb -> a a\n").unwrap_err();
        assert_eq!(
            err,
            SubstError::NonConstantLength {
                rule: "a".into(),
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn rejects_unknown_label() {
        let err = parse_rules("kind = word\nfactor = 2\nalphabet = a b\na -> a c\nb -> a a\n").unwrap_err();
        assert!(matches!(err, SubstError::UnknownLabel { ref label, .. } if label == "c"));
    }

    #[test]
    fn rejects_ragged_block() {
        let text = "kind = block\nfactor = 2\nalphabet = x y\nx ->\n  x y\n  y\ny ->\n  x x\n  y y\n";
        assert!(matches!(parse_rules(text), Err(SubstError::RaggedBlock { ref rule, .. }) if rule == "x"));
        let short = "kind = block\nfactor = 2\nalphabet = x y\nx ->\n  x y\ny ->\n  x x\n  y y\n";
        assert!(matches!(parse_rules(short), Err(SubstError::RaggedBlock { .. })));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_rules("# header\nkind = word\nfactor: 2\n").unwrap_err();
        assert_eq!(err, SubstError::Syntax { line: 3, message: "expected `key = value` header line".into() });
        let err = parse_rules("kind = tiles\n").unwrap_err();
        assert!(matches!(err, SubstError::Syntax { line: 1, .. }));
        let err = parse_rules("kind = word\nalphabet = a\na -> a a\n").unwrap_err();
        assert!(matches!(err, SubstError::Syntax { line: 3, .. }));
    }

    #[test]
    fn missing_and_duplicate_rules() {
        let err = parse_rules("kind = word\nfactor = 2\nalphabet = a b\na -> a b\n").unwrap_err();
        assert_eq!(err, SubstError::MissingRule("b".into()));
        let err = parse_rules("kind = word\nfactor = 2\nalphabet = a b\na -> a b\na -> b b\n").unwrap_err();
        assert_eq!(err, SubstError::DuplicateRule("a".into()));
    }

    #[test]
    fn render_round_trips_bundled_rules() {
        for text in [super::super::builtin::PERIOD_DOUBLING_RULES, super::super::builtin::CHAIR_RULES] {
            let s = parse_rules(text).unwrap();
            assert_eq!(parse_rules(&render_rules(&s)).unwrap(), s);
        }
    }
}
