//! ARFF reading and writing, with the two multi-label label-header
//! conventions in common use:
//!
//! * Mulan: plain ARFF plus an XML document naming the label attributes.
//! * MEKA: the relation name carries `-C n`; the first `n` attributes are
//!   labels (or the last `|n|` when `n` is negative).

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{FeatureKind, FeatureRow, FeatureSpec, FeatureValue, Instance, LabelSet, MultiLabelDataset};
use crate::error::ParseError;

#[derive(Debug, Clone)]
struct Attribute {
    name: String,
    kind: FeatureKind,
}

#[derive(Debug, Clone, PartialEq)]
struct Token {
    text: String,
    quoted: bool,
}

impl Token {
    fn is_missing(&self) -> bool {
        !self.quoted && self.text == "?"
    }
}

#[derive(Debug)]
enum RawRow {
    Dense(Vec<Token>),
    Sparse(Vec<(usize, Token)>),
}

#[derive(Debug)]
struct RawArff {
    relation: String,
    attributes: Vec<Attribute>,
    rows: Vec<(usize, RawRow)>,
}

/// Parses a Mulan dataset: ARFF text plus the XML label header.
///
/// Labels are indexed in XML declaration order; all other attributes become
/// features, in ARFF order.
pub fn parse_mulan(arff_text: &str, xml_text: &str) -> Result<MultiLabelDataset, ParseError> {
    let labels = parse_mulan_xml(xml_text)?;
    let raw = read_arff(arff_text)?;
    let mut by_name: HashMap<&str, usize> = HashMap::new();
    for (i, a) in raw.attributes.iter().enumerate() {
        by_name.insert(a.name.as_str(), i);
    }
    let mut label_attrs = Vec::with_capacity(labels.len());
    for l in &labels {
        match by_name.get(l.as_str()) {
            Some(&i) => label_attrs.push(i),
            None => return Err(ParseError::Schema(format!("label `{l}` declared in XML is not an ARFF attribute"))),
        }
    }
    let name = raw.relation.clone();
    assemble(raw, &label_attrs, name)
}

/// Parses a MEKA-style ARFF document, where the relation name holds `-C n`.
pub fn parse_meka(arff_text: &str) -> Result<MultiLabelDataset, ParseError> {
    let raw = read_arff(arff_text)?;
    let c = meka_label_count(&raw.relation)
        .ok_or_else(|| ParseError::Schema(format!("relation `{}` has no `-C <n>` label count", raw.relation)))?;
    let n_attr = raw.attributes.len() as i64;
    if c == 0 || c.abs() > n_attr {
        return Err(ParseError::Schema(format!("label count -C {c} invalid for {n_attr} attributes")));
    }
    let label_attrs: Vec<usize> =
        if c > 0 { (0..c as usize).collect() } else { ((n_attr + c) as usize..n_attr as usize).collect() };
    let name = meka_dataset_name(&raw.relation);
    assemble(raw, &label_attrs, name)
}

/// Parses with the Mulan loader when an XML header is given, otherwise with
/// the MEKA loader if the relation name carries `-C`.
pub fn parse_auto(arff_text: &str, xml_text: Option<&str>) -> Result<MultiLabelDataset, ParseError> {
    match xml_text {
        Some(xml) => parse_mulan(arff_text, xml),
        None => parse_meka(arff_text),
    }
}

/// True if the relation name carries a MEKA `-C` option.
pub fn is_meka_relation(relation: &str) -> bool {
    meka_label_count(relation).is_some()
}

fn meka_label_count(relation: &str) -> Option<i64> {
    let mut tokens = relation.split_whitespace();
    while let Some(t) = tokens.next() {
        if t == "-C" {
            return tokens.next().and_then(|n| n.parse().ok());
        }
        if let Some(rest) = t.strip_prefix("-C") {
            if let Ok(n) = rest.parse() {
                return Some(n);
            }
        }
    }
    None
}

fn meka_dataset_name(relation: &str) -> String {
    match relation.split_once(':') {
        Some((head, _)) if !head.trim().is_empty() => head.trim().to_string(),
        _ => relation.to_string(),
    }
}

/// Label names from a Mulan XML header, in document order.
pub fn parse_mulan_xml(xml_text: &str) -> Result<Vec<String>, ParseError> {
    let doc = roxmltree::Document::parse(xml_text).map_err(|e| ParseError::Xml(e.to_string()))?;
    let mut names = Vec::new();
    for node in doc.descendants().filter(|n| n.has_tag_name("label")) {
        let name =
            node.attribute("name").ok_or_else(|| ParseError::Xml("<label> element without a name attribute".into()))?;
        if names.iter().any(|n| n == name) {
            return Err(ParseError::Schema(format!("label `{name}` declared twice in XML")));
        }
        names.push(name.to_string());
    }
    if names.is_empty() {
        return Err(ParseError::Schema("XML header declares no labels".into()));
    }
    Ok(names)
}

fn assemble(raw: RawArff, label_attrs: &[usize], name: String) -> Result<MultiLabelDataset, ParseError> {
    let q = label_attrs.len();
    let n_attr = raw.attributes.len();

    // attribute index -> role
    #[derive(Clone, Copy)]
    enum Role {
        Label(usize),
        Feature(usize),
    }
    let mut roles = vec![Role::Feature(0); n_attr];
    for (k, &a) in label_attrs.iter().enumerate() {
        roles[a] = Role::Label(k);
    }
    let mut schema = Vec::new();
    for (a, attr) in raw.attributes.iter().enumerate() {
        if let Role::Feature(_) = roles[a] {
            roles[a] = Role::Feature(schema.len());
            schema.push(FeatureSpec { name: attr.name.clone(), kind: attr.kind.clone() });
        }
    }
    let label_names: Vec<String> = label_attrs.iter().map(|&a| raw.attributes[a].name.clone()).collect();

    let mut instances = Vec::with_capacity(raw.rows.len());
    for (line, row) in raw.rows {
        let mut labels = LabelSet::empty(q);
        let features = match row {
            RawRow::Dense(tokens) => {
                if tokens.len() != n_attr {
                    return Err(ParseError::syntax(
                        line,
                        format!("row has {} values, expected {n_attr}", tokens.len()),
                    ));
                }
                let mut values = Vec::with_capacity(schema.len());
                for (a, tok) in tokens.iter().enumerate() {
                    match roles[a] {
                        Role::Label(k) => {
                            if label_value(tok, &label_names[k], line)? {
                                labels.insert(k);
                            }
                        }
                        Role::Feature(_) => values.push(feature_value(tok, &raw.attributes[a], line)?),
                    }
                }
                FeatureRow::Dense(values)
            }
            RawRow::Sparse(entries) => {
                let mut values = Vec::new();
                for (a, tok) in &entries {
                    if *a >= n_attr {
                        return Err(ParseError::syntax(
                            line,
                            format!("sparse index {a} out of range for {n_attr} attributes"),
                        ));
                    }
                    match roles[*a] {
                        Role::Label(k) => {
                            if label_value(tok, &label_names[k], line)? {
                                labels.insert(k);
                            }
                        }
                        Role::Feature(j) => values.push((j as u32, feature_value(tok, &raw.attributes[*a], line)?)),
                    }
                }
                values.sort_by_key(|(j, _)| *j);
                if values.windows(2).any(|w| w[0].0 == w[1].0) {
                    return Err(ParseError::syntax(line, "duplicate index in sparse row"));
                }
                FeatureRow::Sparse(values)
            }
        };
        instances.push(Instance { features, labels });
    }

    MultiLabelDataset::new(name, label_names, schema, instances).map_err(|e| ParseError::Schema(e.0))
}

fn label_value(tok: &Token, label: &str, line: usize) -> Result<bool, ParseError> {
    match tok.text.to_ascii_lowercase().as_str() {
        "1" | "true" => Ok(true),
        "0" | "false" => Ok(false),
        _ => Err(ParseError::LabelValue { line, label: label.to_string(), value: tok.text.clone() }),
    }
}

fn feature_value(tok: &Token, attr: &Attribute, line: usize) -> Result<FeatureValue, ParseError> {
    if tok.is_missing() {
        return Ok(FeatureValue::Missing);
    }
    match &attr.kind {
        FeatureKind::Numeric => {
            tok.text.trim().parse::<f64>().map(FeatureValue::Numeric).map_err(|_| {
                ParseError::syntax(line, format!("attribute `{}`: `{}` is not numeric", attr.name, tok.text))
            })
        }
        FeatureKind::Nominal(values) => {
            values.iter().position(|v| *v == tok.text).map(|i| FeatureValue::Nominal(i as u32)).ok_or_else(|| {
                ParseError::syntax(line, format!("attribute `{}`: `{}` is not a declared value", attr.name, tok.text))
            })
        }
        FeatureKind::String | FeatureKind::Date(_) => Ok(FeatureValue::Text(tok.text.clone().into())),
    }
}

fn read_arff(text: &str) -> Result<RawArff, ParseError> {
    let mut relation: Option<String> = None;
    let mut attributes: Vec<Attribute> = Vec::new();
    let mut in_data = false;
    let mut rows = Vec::new();
    let mut last_line = 0;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if in_data {
            rows.push((line_no, read_row(line, line_no)?));
            continue;
        }
        let (keyword, rest) = split_keyword(line);
        match keyword.to_ascii_lowercase().as_str() {
            "@relation" => {
                if relation.is_some() {
                    return Err(ParseError::syntax(line_no, "duplicate @relation"));
                }
                let mut cur = Cursor::new(rest, line_no);
                let name = cur.word()?;
                if name.text.is_empty() {
                    return Err(ParseError::syntax(line_no, "@relation without a name"));
                }
                relation = Some(name.text);
            }
            "@attribute" => {
                if relation.is_none() {
                    return Err(ParseError::syntax(line_no, "@attribute before @relation"));
                }
                let attr = read_attribute(rest, line_no)?;
                if attributes.iter().any(|a| a.name == attr.name) {
                    return Err(ParseError::syntax(line_no, format!("duplicate attribute `{}`", attr.name)));
                }
                attributes.push(attr);
            }
            "@data" => {
                if attributes.is_empty() {
                    return Err(ParseError::syntax(line_no, "@data before any @attribute"));
                }
                in_data = true;
            }
            _ => return Err(ParseError::syntax(line_no, format!("unexpected header line `{line}`"))),
        }
    }
    if !in_data {
        return Err(ParseError::syntax(last_line.max(1), "missing @data section"));
    }
    Ok(RawArff { relation: relation.unwrap_or_default(), attributes, rows })
}

fn split_keyword(line: &str) -> (&str, &str) {
    match line.find(|c: char| c.is_whitespace()) {
        Some(i) => (&line[..i], line[i..].trim_start()),
        None => (line, ""),
    }
}

fn read_attribute(rest: &str, line_no: usize) -> Result<Attribute, ParseError> {
    let mut cur = Cursor::new(rest, line_no);
    let name = cur.word()?;
    if name.text.is_empty() {
        return Err(ParseError::syntax(line_no, "@attribute without a name"));
    }
    let type_spec = cur.rest().trim();
    let kind = if let Some(inner) = type_spec.strip_prefix('{') {
        let inner =
            inner.strip_suffix('}').ok_or_else(|| ParseError::syntax(line_no, "unterminated nominal value list"))?;
        let values: Vec<String> = split_values(inner, line_no)?.into_iter().map(|t| t.text).collect();
        if values.is_empty() || values.iter().any(|v| v.is_empty()) {
            return Err(ParseError::syntax(line_no, "empty nominal value"));
        }
        FeatureKind::Nominal(values)
    } else {
        let (ty, arg) = split_keyword(type_spec);
        match ty.to_ascii_lowercase().as_str() {
            "numeric" | "real" | "integer" => FeatureKind::Numeric,
            "string" => FeatureKind::String,
            "date" => {
                let fmt = if arg.is_empty() { None } else { Some(Cursor::new(arg, line_no).word()?.text) };
                FeatureKind::Date(fmt)
            }
            "" => return Err(ParseError::syntax(line_no, "@attribute without a type")),
            other => return Err(ParseError::syntax(line_no, format!("unsupported attribute type `{other}`"))),
        }
    };
    Ok(Attribute { name: name.text, kind })
}

fn read_row(line: &str, line_no: usize) -> Result<RawRow, ParseError> {
    if let Some(inner) = line.strip_prefix('{') {
        let inner = inner.strip_suffix('}').ok_or_else(|| ParseError::syntax(line_no, "unterminated sparse row"))?;
        let mut entries = Vec::new();
        if inner.trim().is_empty() {
            return Ok(RawRow::Sparse(entries));
        }
        let mut cur = Cursor::new(inner, line_no);
        loop {
            cur.skip_ws();
            let idx_tok = cur.word()?;
            let idx: usize = idx_tok
                .text
                .parse()
                .map_err(|_| ParseError::syntax(line_no, format!("bad sparse index `{}`", idx_tok.text)))?;
            cur.skip_ws();
            let value = cur.value()?;
            entries.push((idx, value));
            cur.skip_ws();
            match cur.next_char() {
                None => break,
                Some(',') => continue,
                Some(c) => return Err(ParseError::syntax(line_no, format!("unexpected `{c}` in sparse row"))),
            }
        }
        Ok(RawRow::Sparse(entries))
    } else {
        Ok(RawRow::Dense(split_values(line, line_no)?))
    }
}

/// Splits a comma-separated list of possibly quoted values.
fn split_values(s: &str, line_no: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    if s.trim().is_empty() {
        return Ok(out);
    }
    let mut cur = Cursor::new(s, line_no);
    loop {
        cur.skip_ws();
        out.push(cur.value()?);
        cur.skip_ws();
        match cur.next_char() {
            None => return Ok(out),
            Some(',') => {}
            Some(c) => return Err(ParseError::syntax(line_no, format!("unexpected `{c}` after value"))),
        }
    }
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str, line: usize) -> Self {
        Cursor { s, pos: 0, line }
    }

    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn next_char(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.next_char();
        }
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    /// A quoted string, or a run of characters up to whitespace.
    fn word(&mut self) -> Result<Token, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(q @ ('\'' | '"')) => self.quoted(q),
            _ => {
                let start = self.pos;
                while self.peek().is_some_and(|c| !c.is_whitespace()) {
                    self.next_char();
                }
                Ok(Token { text: self.s[start..self.pos].to_string(), quoted: false })
            }
        }
    }

    /// A quoted string, or a run of characters up to a comma.
    fn value(&mut self) -> Result<Token, ParseError> {
        match self.peek() {
            Some(q @ ('\'' | '"')) => self.quoted(q),
            _ => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c != ',') {
                    self.next_char();
                }
                let text = self.s[start..self.pos].trim_end();
                if text.is_empty() {
                    return Err(ParseError::syntax(self.line, "empty value"));
                }
                Ok(Token { text: text.to_string(), quoted: false })
            }
        }
    }

    fn quoted(&mut self, quote: char) -> Result<Token, ParseError> {
        self.next_char();
        let mut text = String::new();
        loop {
            match self.next_char() {
                None => return Err(ParseError::syntax(self.line, "unterminated quoted string")),
                Some('\\') => match self.next_char() {
                    Some('n') => text.push('\n'),
                    Some('t') => text.push('\t'),
                    Some('r') => text.push('\r'),
                    Some(c) => text.push(c),
                    None => return Err(ParseError::syntax(self.line, "dangling escape in quoted string")),
                },
                Some(c) if c == quote => break,
                Some(c) => text.push(c),
            }
        }
        Ok(Token { text, quoted: true })
    }
}

fn needs_quotes(s: &str) -> bool {
    s.is_empty()
        || s == "?"
        || s.chars().any(|c| c.is_whitespace() || matches!(c, ',' | '\'' | '"' | '{' | '}' | '%' | '\\'))
}

fn quote(s: &str) -> String {
    if !needs_quotes(s) {
        return s.to_string();
    }
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        match c {
            '\'' => out.push_str("\\'"),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('\'');
    out
}

fn always_quote(s: &str) -> String {
    let q = quote(s);
    if q.starts_with('\'') {
        q
    } else {
        format!("'{q}'")
    }
}

fn kind_decl(kind: &FeatureKind) -> String {
    match kind {
        FeatureKind::Numeric => "numeric".into(),
        FeatureKind::String => "string".into(),
        FeatureKind::Date(None) => "date".into(),
        FeatureKind::Date(Some(f)) => format!("date {}", quote(f)),
        FeatureKind::Nominal(values) => {
            let v: Vec<String> = values.iter().map(|v| quote(v)).collect();
            format!("{{{}}}", v.join(","))
        }
    }
}

fn write_value(out: &mut String, v: &FeatureValue, kind: &FeatureKind) {
    match (v, kind) {
        (FeatureValue::Missing, _) => out.push('?'),
        (FeatureValue::Numeric(x), _) => {
            let _ = write!(out, "{x}");
        }
        (FeatureValue::Nominal(i), FeatureKind::Nominal(values)) => out.push_str(&quote(&values[*i as usize])),
        (FeatureValue::Nominal(i), _) => {
            let _ = write!(out, "{i}");
        }
        (FeatureValue::Text(t), _) => out.push_str(&always_quote(t)),
    }
}

/// Where the label attributes go in a serialized document.
#[derive(Clone, Copy)]
enum LabelPlacement {
    Last,
    First,
}

fn write_arff(d: &MultiLabelDataset, relation: &str, placement: LabelPlacement) -> String {
    let q = d.num_labels();
    let m = d.num_features();
    let schema = d.feature_schema();
    let (feature_offset, label_offset) = match placement {
        LabelPlacement::Last => (0, m),
        LabelPlacement::First => (q, 0),
    };

    let mut out = String::new();
    let _ = writeln!(out, "@relation {}\n", always_quote(relation));
    let label_decls = d.label_names().iter().map(|l| format!("@attribute {} {{0,1}}", quote(l)));
    let feature_decls = schema.iter().map(|f| format!("@attribute {} {}", quote(&f.name), kind_decl(&f.kind)));
    let decls: Vec<String> = match placement {
        LabelPlacement::Last => feature_decls.chain(label_decls).collect(),
        LabelPlacement::First => label_decls.chain(feature_decls).collect(),
    };
    for decl in decls {
        out.push_str(&decl);
        out.push('\n');
    }
    out.push_str("\n@data\n");

    for inst in d.instances() {
        match &inst.features {
            FeatureRow::Dense(values) => {
                let mut cells: Vec<String> = Vec::with_capacity(m + q);
                let labels = (0..q).map(|k| if inst.labels.contains(k) { "1" } else { "0" }.to_string());
                let feats = values.iter().zip(schema).map(|(v, spec)| {
                    let mut s = String::new();
                    write_value(&mut s, v, &spec.kind);
                    s
                });
                match placement {
                    LabelPlacement::Last => cells.extend(feats.chain(labels)),
                    LabelPlacement::First => cells.extend(labels.chain(feats)),
                }
                out.push_str(&cells.join(","));
            }
            FeatureRow::Sparse(entries) => {
                let feats = entries.iter().map(|(j, v)| {
                    let mut s = format!("{} ", *j as usize + feature_offset);
                    write_value(&mut s, v, &schema[*j as usize].kind);
                    s
                });
                let labels = inst.labels.iter().map(|k| format!("{} 1", k + label_offset));
                let cells: Vec<String> = match placement {
                    LabelPlacement::Last => feats.chain(labels).collect(),
                    LabelPlacement::First => labels.chain(feats).collect(),
                };
                let _ = write!(out, "{{{}}}", cells.join(","));
            }
        }
        out.push('\n');
    }
    out
}

/// Canonical ARFF serialization: features in schema order, then the labels
/// as `{0,1}` attributes in label order. Pair with [`to_mulan_xml`].
pub fn to_arff(d: &MultiLabelDataset) -> String {
    write_arff(d, d.name(), LabelPlacement::Last)
}

/// MEKA serialization: labels first, label count in the relation name.
pub fn to_meka_arff(d: &MultiLabelDataset) -> String {
    let relation = format!("{}: -C {}", d.name(), d.num_labels());
    write_arff(d, &relation, LabelPlacement::First)
}

/// Mulan XML label header for `d`.
pub fn to_mulan_xml(d: &MultiLabelDataset) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<labels xmlns=\"http://mulan.sourceforge.net/labels\">\n",
    );
    for l in d.label_names() {
        let escaped = l.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;");
        let _ = writeln!(out, "<label name=\"{escaped}\"></label>");
    }
    out.push_str("</labels>\n");
    out
}
