//! Template object graph and its block text format.
//!
//! ```text
//! <TEMPLATE-1> :=
//!   DOC_NR: "d1"
//!
//! <TIE_UP-1> :=
//!   ENTITY: <ENTITY-1> <ENTITY-2>
//!   JOINT_VENTURE: <ENTITY-3>
//!   STATUS: EXISTING
//!
//! <ENTITY-1> :=
//!   NAME: "田辺製薬"
//!   TYPE: COMPANY
//! ```
//!
//! Strings are double-quoted with `\"` and `\\` escapes, references are
//! `<TYPE-n>`, other values are bare symbols. Empty slots are omitted.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::discourse::{CompanyId, CompanyRegistry, ConceptSource, TieUpCluster};
use crate::error::{Error, Result};
use crate::token::pos;

pub const ECONOMIC_ACTIVITY: &str = "ECONOMIC-ACTIVITY";
pub const ESTABLISH: &str = "ESTABLISH";
pub const DISSOLVED: &str = "DISSOLVED";
pub const CREATED_SLOT: &str = "@CNAME_CREATED_OBJ";

pub const TEMPLATE: &str = "TEMPLATE";
pub const TIE_UP: &str = "TIE_UP";
pub const ENTITY: &str = "ENTITY";
pub const ACTIVITY: &str = "ACTIVITY";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Existing,
    Dissolved,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Existing => "EXISTING",
            Status::Dissolved => "DISSOLVED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityObject {
    pub id: usize,
    pub name: String,
    pub aliases: Vec<String>,
    pub entity_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityObject {
    pub id: usize,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieUpObject {
    pub id: usize,
    pub entities: Vec<usize>,
    pub joint_venture: Option<usize>,
    pub activities: Vec<usize>,
    pub status: Status,
}

impl TieUpObject {
    /// A tie-up needs at least two partner entities.
    pub fn is_well_formed(&self) -> bool {
        self.entities.len() >= 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateGraph {
    pub doc_id: String,
    pub tie_ups: Vec<TieUpObject>,
    pub entities: Vec<EntityObject>,
    pub activities: Vec<ActivityObject>,
}

impl TemplateGraph {
    pub fn empty(doc_id: impl Into<String>) -> Self {
        TemplateGraph {
            doc_id: doc_id.into(),
            tie_ups: Vec::new(),
            entities: Vec::new(),
            activities: Vec::new(),
        }
    }

    /// First reference that does not resolve to an object of the graph.
    pub fn dangling_reference(&self) -> Option<String> {
        let entities: BTreeSet<usize> = self.entities.iter().map(|e| e.id).collect();
        let activities: BTreeSet<usize> = self.activities.iter().map(|a| a.id).collect();
        for t in &self.tie_ups {
            for e in t.entities.iter().chain(&t.joint_venture) {
                if !entities.contains(e) {
                    return Some(format!("<{ENTITY}-{e}>"));
                }
            }
            for a in &t.activities {
                if !activities.contains(a) {
                    return Some(format!("<{ACTIVITY}-{a}>"));
                }
            }
        }
        None
    }

    pub fn to_objects(&self) -> Vec<Object> {
        let mut out = vec![Object::new(TEMPLATE, 1).with(
            "DOC_NR",
            vec![Value::Str(self.doc_id.clone())],
        )];
        for t in &self.tie_ups {
            out.push(
                Object::new(TIE_UP, t.id)
                    .with("ENTITY", t.entities.iter().map(|&e| Value::reference(ENTITY, e)).collect())
                    .with("JOINT_VENTURE", t.joint_venture.iter().map(|&e| Value::reference(ENTITY, e)).collect())
                    .with("ACTIVITY", t.activities.iter().map(|&a| Value::reference(ACTIVITY, a)).collect())
                    .with("STATUS", vec![Value::Sym(t.status.as_str().into())]),
            );
        }
        for e in &self.entities {
            out.push(
                Object::new(ENTITY, e.id)
                    .with("NAME", vec![Value::Str(e.name.clone())])
                    .with("ALIASES", e.aliases.iter().cloned().map(Value::Str).collect())
                    .with("TYPE", vec![Value::Sym(e.entity_type.clone())]),
            );
        }
        for a in &self.activities {
            out.push(Object::new(ACTIVITY, a.id).with("DESCRIPTION", vec![Value::Str(a.description.clone())]));
        }
        out
    }

    pub fn from_objects(objects: &[Object]) -> Result<Self> {
        let mut graph = TemplateGraph::empty("");
        let mut has_header = false;
        for o in objects {
            let line = o.line;
            match o.kind.as_str() {
                TEMPLATE => {
                    graph.doc_id = o.single_str("DOC_NR")?.unwrap_or_default();
                    has_header = true;
                }
                TIE_UP => {
                    let status = match o.single_sym("STATUS")?.as_deref() {
                        None | Some("EXISTING") => Status::Existing,
                        Some("DISSOLVED") => Status::Dissolved,
                        Some(other) => return Err(Error::parse(line, format!("unknown status {other}"))),
                    };
                    let jv = o.refs("JOINT_VENTURE", ENTITY)?;
                    if jv.len() > 1 {
                        return Err(Error::parse(line, "JOINT_VENTURE takes one value"));
                    }
                    graph.tie_ups.push(TieUpObject {
                        id: o.n,
                        entities: o.refs("ENTITY", ENTITY)?,
                        joint_venture: jv.first().copied(),
                        activities: o.refs("ACTIVITY", ACTIVITY)?,
                        status,
                    });
                }
                ENTITY => graph.entities.push(EntityObject {
                    id: o.n,
                    name: o
                        .single_str("NAME")?
                        .ok_or_else(|| Error::parse(line, "entity without NAME"))?,
                    aliases: o.strs("ALIASES")?,
                    entity_type: o.single_sym("TYPE")?.unwrap_or_else(|| "COMPANY".into()),
                }),
                ACTIVITY => graph.activities.push(ActivityObject {
                    id: o.n,
                    description: o
                        .single_str("DESCRIPTION")?
                        .ok_or_else(|| Error::parse(line, "activity without DESCRIPTION"))?,
                }),
                other => return Err(Error::parse(line, format!("unknown object type {other}"))),
            }
        }
        if !has_header {
            return Err(Error::parse(1, "missing <TEMPLATE-1> header"));
        }
        Ok(graph)
    }
}

/// Block text of a reference-closed graph.
pub fn serialize_templates(graph: &TemplateGraph) -> Result<String> {
    if let Some(r) = graph.dangling_reference() {
        return Err(Error::DanglingReference(r));
    }
    Ok(write_objects(&graph.to_objects()))
}

pub fn parse_templates(text: &str) -> Result<TemplateGraph> {
    TemplateGraph::from_objects(&parse_objects(text)?)
}

/// Builds the object graph from merged tie-up clusters.
///
/// Entities are numbered in order of first mention, tie-ups in cluster
/// order, activities in order of appearance.
pub fn generate_templates(doc_id: &str, clusters: &[TieUpCluster], registry: &CompanyRegistry) -> TemplateGraph {
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    enum EntityKey {
        Registered(CompanyId),
        Unregistered(String),
    }

    struct Draft {
        entities: Vec<CompanyId>,
        jv: Option<EntityKey>,
        activities: Vec<String>,
        status: Status,
    }

    // first mention position of every referenced entity
    let mut first_mention: BTreeMap<EntityKey, (usize, usize)> = BTreeMap::new();
    let mut note = |key: EntityKey, at: (usize, usize)| {
        let slot = first_mention.entry(key).or_insert(at);
        *slot = (*slot).min(at);
    };

    let mut drafts = Vec::new();
    for cluster in clusters {
        let mut entities: Vec<CompanyId> = cluster.segment.tieup_ids.iter().copied().collect();
        entities.sort_by_key(|id| registry.root(*id).position);
        for id in &entities {
            note(EntityKey::Registered(*id), registry.root(*id).position);
        }

        let mut jv = None;
        let mut activities: Vec<String> = Vec::new();
        let mut status = Status::Existing;
        for c in &cluster.concepts {
            if c.label == DISSOLVED {
                status = Status::Dissolved;
            }
            if c.source != ConceptSource::Pattern {
                continue;
            }
            if c.label == ECONOMIC_ACTIVITY && !activities.contains(&c.text) {
                activities.push(c.text.clone());
            }
            if c.label == ESTABLISH && jv.is_none() {
                if let Some(b) = c.binding(CREATED_SLOT) {
                    let key = match b.ids.last() {
                        Some(id) => {
                            note(EntityKey::Registered(*id), registry.root(*id).position);
                            EntityKey::Registered(*id)
                        }
                        None => {
                            let key = EntityKey::Unregistered(b.head.clone());
                            note(key.clone(), (c.sent_index, b.span.start));
                            key
                        }
                    };
                    jv = Some(key);
                }
            }
        }
        drafts.push(Draft {
            entities,
            jv,
            activities,
            status,
        });
    }

    let mut order: Vec<(&EntityKey, &(usize, usize))> = first_mention.iter().collect();
    order.sort_by(|a, b| a.1.cmp(b.1).then_with(|| a.0.cmp(b.0)));
    let number: BTreeMap<EntityKey, usize> = order
        .iter()
        .enumerate()
        .map(|(k, (key, _))| ((*key).clone(), k + 1))
        .collect();

    let entities = order
        .iter()
        .map(|(key, _)| match key {
            EntityKey::Registered(id) => entity_for(number[*key], *id, registry),
            EntityKey::Unregistered(name) => EntityObject {
                id: number[*key],
                name: name.clone(),
                aliases: Vec::new(),
                entity_type: "COMPANY".into(),
            },
        })
        .collect();

    let mut activities = Vec::new();
    let tie_ups = drafts
        .into_iter()
        .enumerate()
        .map(|(k, d)| {
            let mut refs = Vec::new();
            for desc in d.activities {
                activities.push(ActivityObject {
                    id: activities.len() + 1,
                    description: desc,
                });
                refs.push(activities.len());
            }
            TieUpObject {
                id: k + 1,
                entities: d.entities.iter().map(|id| number[&EntityKey::Registered(*id)]).collect(),
                joint_venture: d.jv.map(|key| number[&key]),
                activities: refs,
                status: d.status,
            }
        })
        .collect();

    TemplateGraph {
        doc_id: doc_id.to_string(),
        tie_ups,
        entities,
        activities,
    }
}

fn entity_for(number: usize, id: CompanyId, registry: &CompanyRegistry) -> EntityObject {
    let root = registry.root(id);
    let mut aliases: Vec<String> = Vec::new();
    let mut is_company = false;
    for e in registry.members(id) {
        is_company |= e.pos == pos::COMPANY;
        if e.string != root.string && !aliases.contains(&e.string) {
            aliases.push(e.string.clone());
        }
    }
    EntityObject {
        id: number,
        name: root.string.clone(),
        aliases,
        entity_type: if is_company {
            "COMPANY".into()
        } else {
            root.pos.to_uppercase()
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Str(String),
    Ref { kind: String, n: usize },
    Sym(String),
}

impl Value {
    pub fn reference(kind: &str, n: usize) -> Self {
        Value::Ref {
            kind: kind.to_string(),
            n,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Str(s) => {
                f.write_char('"')?;
                for c in s.chars() {
                    if c == '"' || c == '\\' {
                        f.write_char('\\')?;
                    }
                    f.write_char(c)?;
                }
                f.write_char('"')
            }
            Value::Ref { kind, n } => write!(f, "<{kind}-{n}>"),
            Value::Sym(s) => f.write_str(s),
        }
    }
}

/// Schema-free view of one block, shared with the scorer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Object {
    pub kind: String,
    pub n: usize,
    pub slots: Vec<(String, Vec<Value>)>,
    /// Header line in the source text, 0 when built in memory.
    pub line: usize,
}

impl Object {
    pub fn new(kind: &str, n: usize) -> Self {
        Object {
            kind: kind.to_string(),
            n,
            slots: Vec::new(),
            line: 0,
        }
    }

    /// Adds a slot unless `values` is empty.
    pub fn with(mut self, slot: &str, values: Vec<Value>) -> Self {
        if !values.is_empty() {
            self.slots.push((slot.to_string(), values));
        }
        self
    }

    pub fn label(&self) -> String {
        format!("<{}-{}>", self.kind, self.n)
    }

    pub fn values(&self, slot: &str) -> &[Value] {
        self.slots
            .iter()
            .find(|(s, _)| s == slot)
            .map(|(_, v)| v.as_slice())
            .unwrap_or(&[])
    }

    fn strs(&self, slot: &str) -> Result<Vec<String>> {
        self.values(slot)
            .iter()
            .map(|v| match v {
                Value::Str(s) => Ok(s.clone()),
                other => Err(Error::parse(self.line, format!("{slot}: expected a string, found {other}"))),
            })
            .collect()
    }

    fn single_str(&self, slot: &str) -> Result<Option<String>> {
        let mut v = self.strs(slot)?;
        if v.len() > 1 {
            return Err(Error::parse(self.line, format!("{slot} takes one value")));
        }
        Ok(v.pop())
    }

    fn single_sym(&self, slot: &str) -> Result<Option<String>> {
        match self.values(slot) {
            [] => Ok(None),
            [Value::Sym(s)] => Ok(Some(s.clone())),
            _ => Err(Error::parse(self.line, format!("{slot} takes one symbol"))),
        }
    }

    fn refs(&self, slot: &str, kind: &str) -> Result<Vec<usize>> {
        self.values(slot)
            .iter()
            .map(|v| match v {
                Value::Ref { kind: k, n } if k == kind => Ok(*n),
                other => Err(Error::parse(self.line, format!("{slot}: expected <{kind}-n>, found {other}"))),
            })
            .collect()
    }
}

pub fn write_objects(objects: &[Object]) -> String {
    let mut out = String::new();
    for (k, o) in objects.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "{} :=", o.label());
        for (slot, values) in &o.slots {
            let _ = write!(out, "  {slot}:");
            for v in values {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
    }
    out
}

fn parse_label(s: &str, line: usize) -> Result<(String, usize)> {
    let inner = s
        .strip_prefix('<')
        .and_then(|s| s.strip_suffix('>'))
        .ok_or_else(|| Error::parse(line, format!("bad object reference {s:?}")))?;
    let (kind, n) = inner
        .rsplit_once('-')
        .ok_or_else(|| Error::parse(line, format!("bad object reference {s:?}")))?;
    let n: usize = n
        .parse()
        .map_err(|_| Error::parse(line, format!("bad object number in {s:?}")))?;
    if kind.is_empty() {
        return Err(Error::parse(line, format!("bad object reference {s:?}")));
    }
    Ok((kind.to_string(), n))
}

fn parse_values(text: &str, line: usize) -> Result<Vec<Value>> {
    let mut values = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '"' {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some('\\') => match chars.next() {
                        Some(e) => s.push(e),
                        None => return Err(Error::parse(line, "dangling escape")),
                    },
                    Some('"') => break,
                    Some(ch) => s.push(ch),
                    None => return Err(Error::parse(line, "unterminated string")),
                }
            }
            values.push(Value::Str(s));
            continue;
        }
        let mut word = String::new();
        while let Some(&ch) = chars.peek() {
            if ch.is_whitespace() {
                break;
            }
            word.push(ch);
            chars.next();
        }
        if word.starts_with('<') {
            let (kind, n) = parse_label(&word, line)?;
            values.push(Value::Ref { kind, n });
        } else {
            values.push(Value::Sym(word));
        }
    }
    Ok(values)
}

/// Parses block text into objects.
pub fn parse_objects(text: &str) -> Result<Vec<Object>> {
    let mut objects: Vec<Object> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut open = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            open = false;
            continue;
        }
        if let Some(head) = line.strip_suffix(":=") {
            let (kind, n) = parse_label(head.trim(), line_no)?;
            if !seen.insert((kind.clone(), n)) {
                return Err(Error::parse(line_no, format!("duplicate object <{kind}-{n}>")));
            }
            let mut o = Object::new(&kind, n);
            o.line = line_no;
            objects.push(o);
            open = true;
            continue;
        }
        if !open || !line.starts_with(char::is_whitespace) {
            return Err(Error::parse(line_no, "slot line outside an object"));
        }
        let (slot, rest) = line
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::parse(line_no, "expected `SLOT: values`"))?;
        let values = parse_values(rest, line_no)?;
        let current = objects.last_mut().unwrap();
        if current.slots.iter().any(|(s, _)| s == slot) {
            return Err(Error::parse(line_no, format!("duplicate slot {slot}")));
        }
        if !values.is_empty() {
            current.slots.push((slot.trim().to_string(), values));
        }
    }
    Ok(objects)
}
