//! Line-oriented text format.
//!
//! ```text
//! nielsendb v1
//! group <space> <m> = <free_rank> [d1,d2,...] gens <labels> src "<citation>"
//! hom <name> <space,m> -> <space,m> matrix [[..],[..]] src "<citation>"
//! assert_exact <homref> <homref>
//! assert_zero <homref>
//! assert_surjective <homref>
//! ```
//!
//! A `<homref>` is `name[src->dst]`. Matrix rows are target coordinates.
//! `#` starts a comment outside quoted strings.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;

use super::{Assertion, Database, DbError, GroupEntry, HomEntry, HomKey, Loc, SpaceId};
use crate::fgab::FgAbGroup;

const HEADER: &str = "nielsendb";

pub(super) fn parse(text: &str) -> Result<Database, DbError> {
    let mut version = None;
    let mut groups = Vec::new();
    let mut homs = Vec::new();
    let mut assertions = Vec::new();
    let mut group_index = HashMap::new();
    let mut hom_index = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| DbError::Parse {
            line: line_no,
            message,
        };
        let line = strip_comment(raw).map_err(&err)?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(line);
        let keyword = cur.token().map_err(&err)?;

        if version.is_none() {
            if keyword != HEADER {
                return Err(err(format!(
                    "expected header `{HEADER} v1`, found `{keyword}`"
                )));
            }
            let rest = cur.rest().trim();
            if rest != "v1" && !rest.starts_with("v1 ") {
                return Err(err(format!("unsupported format version `{rest}`")));
            }
            version = Some(rest.to_string());
            continue;
        }

        match keyword {
            "group" => {
                let space: SpaceId = cur.token().map_err(&err)?.parse().map_err(&err)?;
                let degree = cur.token().map_err(&err)?;
                let degree: u32 = degree
                    .parse()
                    .map_err(|_| err(format!("degree `{degree}` is not a nonnegative integer")))?;
                let loc = Loc::new(space, degree);
                cur.expect("=").map_err(&err)?;
                let free = cur.token().map_err(&err)?;
                let free_rank: usize = free
                    .parse()
                    .map_err(|_| err(format!("free rank `{free}` is not a nonnegative integer")))?;
                let torsion = cur.bracketed().map_err(&err)?;
                let torsion = parse_int_list(torsion).map_err(&err)?;
                cur.expect("gens").map_err(&err)?;
                let mut labels = Vec::new();
                loop {
                    let t = cur.token().map_err(&err)?;
                    if t == "src" {
                        break;
                    }
                    labels.push(t.to_string());
                }
                let provenance = cur.quoted().map_err(&err)?;
                cur.finish().map_err(&err)?;
                let group =
                    FgAbGroup::new(free_rank, torsion).map_err(|source| DbError::InvalidGroup {
                        line: line_no,
                        loc,
                        source,
                    })?;
                if labels.len() != group.generator_count() {
                    return Err(err(format!(
                        "group entry {loc}: {} generator labels for {} generators",
                        labels.len(),
                        group.generator_count()
                    )));
                }
                if group_index.insert(loc, groups.len()).is_some() {
                    return Err(DbError::Duplicate {
                        line: line_no,
                        key: format!("group {loc}"),
                    });
                }
                groups.push(GroupEntry {
                    loc,
                    group,
                    generator_labels: labels,
                    provenance,
                });
            }
            "hom" => {
                let name = cur.token().map_err(&err)?.parse().map_err(&err)?;
                let source: Loc = cur.token().map_err(&err)?.parse().map_err(&err)?;
                cur.expect("->").map_err(&err)?;
                let target: Loc = cur.token().map_err(&err)?.parse().map_err(&err)?;
                cur.expect("matrix").map_err(&err)?;
                let rows = parse_matrix(cur.bracketed().map_err(&err)?).map_err(&err)?;
                cur.expect("src").map_err(&err)?;
                let provenance = cur.quoted().map_err(&err)?;
                cur.finish().map_err(&err)?;
                let key = HomKey::new(name, source, target);
                if hom_index.insert(key, homs.len()).is_some() {
                    return Err(DbError::Duplicate {
                        line: line_no,
                        key: format!("hom {key}"),
                    });
                }
                homs.push(HomEntry {
                    key,
                    rows,
                    provenance,
                });
            }
            "assert_exact" => {
                let a = cur.token().map_err(&err)?.parse().map_err(&err)?;
                let b = cur.token().map_err(&err)?.parse().map_err(&err)?;
                cur.finish().map_err(&err)?;
                assertions.push(Assertion::Exact(a, b));
            }
            "assert_zero" | "assert_surjective" => {
                let a = cur.token().map_err(&err)?.parse().map_err(&err)?;
                cur.finish().map_err(&err)?;
                assertions.push(if keyword == "assert_zero" {
                    Assertion::Zero(a)
                } else {
                    Assertion::Surjective(a)
                });
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }

    let version = version.ok_or(DbError::Parse {
        line: text.lines().count().max(1),
        message: format!("missing `{HEADER} v1` header"),
    })?;
    Ok(Database {
        version,
        groups,
        homs,
        assertions,
        group_index,
        hom_index,
    })
}

pub(super) fn serialize(db: &Database) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER} {}", db.version).unwrap();
    for g in &db.groups {
        let torsion: Vec<String> = g.group.torsion().iter().map(ToString::to_string).collect();
        write!(
            out,
            "group {} {} = {} [{}] gens",
            g.loc.space,
            g.loc.degree,
            g.group.free_rank(),
            torsion.join(",")
        )
        .unwrap();
        for l in &g.generator_labels {
            write!(out, " {l}").unwrap();
        }
        writeln!(out, " src {}", quote(&g.provenance)).unwrap();
    }
    for h in &db.homs {
        let rows: Vec<String> = h
            .rows
            .iter()
            .map(|r| {
                let xs: Vec<String> = r.iter().map(ToString::to_string).collect();
                format!("[{}]", xs.join(","))
            })
            .collect();
        writeln!(
            out,
            "hom {} {} -> {} matrix [{}] src {}",
            h.key.name,
            h.key.source,
            h.key.target,
            rows.join(","),
            quote(&h.provenance)
        )
        .unwrap();
    }
    for a in &db.assertions {
        match a {
            Assertion::Exact(x, y) => writeln!(out, "assert_exact {x} {y}"),
            Assertion::Zero(x) => writeln!(out, "assert_zero {x}"),
            Assertion::Surjective(x) => writeln!(out, "assert_surjective {x}"),
        }
        .unwrap();
    }
    out
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn strip_comment(line: &str) -> Result<&str, String> {
    let mut in_quote = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if in_quote => escaped = true,
            '"' => in_quote = !in_quote,
            '#' if !in_quote => return Ok(&line[..i]),
            _ => {}
        }
    }
    if in_quote {
        return Err("unterminated quoted string".into());
    }
    Ok(line)
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let rest = &self.s[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn token(&mut self) -> Result<&'a str, String> {
        self.skip_ws();
        let rest = self.rest();
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        if end == 0 {
            return Err("unexpected end of line".into());
        }
        self.pos += end;
        Ok(&rest[..end])
    }

    fn expect(&mut self, word: &str) -> Result<(), String> {
        let t = self
            .token()
            .map_err(|_| format!("expected `{word}` before end of line"))?;
        if t != word {
            return Err(format!("expected `{word}`, found `{t}`"));
        }
        Ok(())
    }

    /// A balanced `[...]` expression, which may contain spaces.
    fn bracketed(&mut self) -> Result<&'a str, String> {
        self.skip_ws();
        let rest = self.rest();
        if !rest.starts_with('[') {
            return Err(format!(
                "expected `[`, found `{}`",
                rest.split_whitespace().next().unwrap_or("")
            ));
        }
        let mut depth = 0usize;
        for (i, c) in rest.char_indices() {
            match c {
                '[' => depth += 1,
                ']' => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos += i + 1;
                        return Ok(&rest[..=i]);
                    }
                }
                _ => {}
            }
        }
        Err("unbalanced brackets".into())
    }

    fn quoted(&mut self) -> Result<String, String> {
        self.skip_ws();
        let rest = self.rest();
        let mut chars = rest.char_indices();
        if !matches!(chars.next(), Some((_, '"'))) {
            return Err("expected a quoted citation".into());
        }
        let mut out = String::new();
        let mut escaped = false;
        for (i, c) in chars {
            if escaped {
                out.push(c);
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                self.pos += i + 1;
                return Ok(out);
            } else {
                out.push(c);
            }
        }
        Err("unterminated quoted string".into())
    }

    fn finish(&mut self) -> Result<(), String> {
        self.skip_ws();
        if self.pos < self.s.len() {
            return Err(format!("unexpected trailing input `{}`", self.rest()));
        }
        Ok(())
    }
}

#[derive(Debug)]
enum Nested {
    Int(BigInt),
    List(Vec<Nested>),
}

fn parse_nested(s: &str) -> Result<Nested, String> {
    fn go(chars: &[char], pos: &mut usize) -> Result<Nested, String> {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
        if *pos >= chars.len() {
            return Err("unexpected end of list".into());
        }
        if chars[*pos] == '[' {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                while *pos < chars.len() && chars[*pos].is_whitespace() {
                    *pos += 1;
                }
                match chars.get(*pos) {
                    Some(']') => {
                        *pos += 1;
                        return Ok(Nested::List(items));
                    }
                    Some(',') if !items.is_empty() => *pos += 1,
                    Some(_) if items.is_empty() => {}
                    Some(c) => return Err(format!("expected `,` or `]`, found `{c}`")),
                    None => return Err("unbalanced brackets".into()),
                }
                items.push(go(chars, pos)?);
            }
        }
        let start = *pos;
        while *pos < chars.len()
            && (chars[*pos] == '-' || chars[*pos] == '+' || chars[*pos].is_ascii_digit())
        {
            *pos += 1;
        }
        let tok: String = chars[start..*pos].iter().collect();
        tok.parse::<BigInt>()
            .map(Nested::Int)
            .map_err(|_| format!("`{tok}` is not an integer"))
    }
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0;
    let v = go(&chars, &mut pos)?;
    if chars[pos..].iter().any(|c| !c.is_whitespace()) {
        return Err("trailing characters after list".into());
    }
    Ok(v)
}

fn parse_int_list(s: &str) -> Result<Vec<BigInt>, String> {
    match parse_nested(s)? {
        Nested::List(items) => items
            .into_iter()
            .map(|x| match x {
                Nested::Int(n) => Ok(n),
                Nested::List(_) => Err("expected a flat list of integers".to_string()),
            })
            .collect(),
        Nested::Int(_) => Err("expected a bracketed list".into()),
    }
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<BigInt>>, String> {
    match parse_nested(s)? {
        Nested::List(rows) => rows
            .into_iter()
            .map(|r| match r {
                Nested::List(xs) => xs
                    .into_iter()
                    .map(|x| match x {
                        Nested::Int(n) => Ok(n),
                        Nested::List(_) => Err("matrix entries must be integers".to_string()),
                    })
                    .collect(),
                Nested::Int(_) => Err("matrix must be a list of rows".to_string()),
            })
            .collect(),
        Nested::Int(_) => Err("expected a bracketed matrix".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::db::{Field, HomName};

    const SMALL: &str = r#"
# tiny
nielsendb v1
group S(6) 11 = 1 [] gens w src "Toda \"Composition Methods\"" # trailing
group S(5) 10 = 0 [2] gens e src "Toda"
group V(R,6) 10 = 0 [] gens src "Paechter"
hom boundary_K S(6),11 -> S(5),10 matrix [[1]] src "exactness"
hom fiber_incl S(5),10 -> V(R,6),10 matrix [] src "target trivial"
hom suspension_E S(5),10 -> S(6),11 matrix [ [ 0 ] ] src "torsion into Z"
assert_exact boundary_K[S(6),11->S(5),10] fiber_incl[S(5),10->V(R,6),10]
assert_zero suspension_E[S(5),10->S(6),11]
"#;

    #[test]
    fn parses_small_file() {
        let db = parse(SMALL).unwrap();
        assert_eq!(db.version, "v1");
        assert_eq!(db.groups.len(), 3);
        assert_eq!(db.groups[0].provenance, "Toda \"Composition Methods\"");
        assert_eq!(db.homs.len(), 3);
        assert_eq!(db.homs[1].rows.len(), 0);
        assert_eq!(db.assertions.len(), 2);
        assert!(db
            .get_group(SpaceId::Stiefel(Field::R, 6), 10)
            .unwrap()
            .is_trivial());
        assert_eq!(db.homs[0].key.name, HomName::BoundaryK);
    }

    #[test]
    fn serialization_round_trips() {
        let db = parse(SMALL).unwrap();
        let again = parse(&serialize(&db)).unwrap();
        assert_eq!(db, again);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "nielsendb v1\ngroup S(6) 11 = 1 [] gens w\n";
        match parse(text) {
            Err(DbError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let text = "nielsendb v1\n\ngroup S(6) 11 = 1 [] gens w src \"x\"\nfrobnicate\n";
        match parse(text) {
            Err(DbError::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("frobnicate"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_required() {
        assert!(matches!(
            parse("group S(1) 1 = 1 [] gens i src \"x\"\n"),
            Err(DbError::Parse { line: 1, .. })
        ));
        assert!(matches!(parse(""), Err(DbError::Parse { .. })));
        assert!(matches!(
            parse("nielsendb v2\n"),
            Err(DbError::Parse { .. })
        ));
    }

    #[test]
    fn broken_divisibility_names_entry() {
        let text = "nielsendb v1\ngroup S(3) 6 = 0 [4,2] gens a b src \"x\"\n";
        match parse(text) {
            Err(e @ DbError::InvalidGroup { line: 2, .. }) => {
                assert!(e.to_string().contains("S(3),6"), "{e}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicates_rejected() {
        let text = "nielsendb v1\ngroup S(1) 1 = 1 [] gens i src \"x\"\ngroup S(1) 1 = 1 [] gens i src \"y\"\n";
        assert!(matches!(
            parse(text),
            Err(DbError::Duplicate { line: 3, .. })
        ));
    }

    #[test]
    fn label_count_checked() {
        let text = "nielsendb v1\ngroup S(1) 1 = 1 [] gens src \"x\"\n";
        assert!(matches!(parse(text), Err(DbError::Parse { line: 2, .. })));
    }

    #[test]
    fn nested_lists() {
        assert_eq!(parse_int_list("[]").unwrap(), Vec::<BigInt>::new());
        assert_eq!(parse_int_list("[2, 4,-8]").unwrap().len(), 3);
        assert!(parse_int_list("[2,,4]").is_err());
        assert!(parse_int_list("[[1]]").is_err());
        assert_eq!(
            parse_matrix("[[],[]]").unwrap(),
            vec![Vec::<BigInt>::new(), vec![]]
        );
        assert!(parse_matrix("[1]").is_err());
    }
}
