//! JSON document formats read by the command-line tool.
//!
//! ```text
//! family   {"ground":4,"members":[[1,2],[3]]}
//!          {"ground":12,"oracle":"card_le_min","params":{}}
//! space    {"kind":"matrix","labels":["a","b"],"rows":[[0,"INF"],["INF",0]]}
//!          {"kind":"graph","labels":["a","b","c"],"edges":[["a","b",1],["b","c","3/2"]]}
//!          {"kind":"grid","side":12,"dim":2,"norm":"linf"}
//!          {"kind":"disjoint_union","parts":[<space>,<space>]}
//! strategy {"m":1,"start":1,"rules":[{"type":"affine","a":1,"b":0}]}
//!          {"m":1,"start":1,"type":"table","entries":[{"prefix":[[1]],"next":1}]}
//! profile  {"base":1,"maps":[{"type":"lookup","values":{"2":1,"3":2}}]}
//! request  {"op":"trasdim","space":<space>,"scales":[2,3,4],"B":12}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::approx::ApdProfile;
use crate::error::{Error, Result};
use crate::metric::{Dist, MetricSpace, Norm};
use crate::natmap::NatMap;
use crate::setfamily::{FinSet, Oracle, SetFamily};
use crate::strategy::{Rule, Strategy};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum FamilyDoc {
    Explicit { ground: u32, members: Vec<Vec<u32>> },
    Oracle {
        ground: u32,
        oracle: String,
        #[serde(default = "empty_object")]
        params: Value,
    },
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

impl FamilyDoc {
    pub fn build(&self) -> Result<SetFamily> {
        match self {
            FamilyDoc::Explicit { ground, members } => SetFamily::from_lists(*ground, members.iter().cloned()),
            FamilyDoc::Oracle { ground, oracle, params } => SetFamily::oracle(*ground, Oracle::builtin(oracle, params)?),
        }
    }

    pub fn from_family(family: &SetFamily) -> Result<Self> {
        Ok(FamilyDoc::Explicit {
            ground: family.ground().size(),
            members: family.members()?.map(FinSet::to_vec).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceDoc {
    Matrix {
        #[serde(default)]
        labels: Option<Vec<String>>,
        rows: Vec<Vec<Dist>>,
    },
    Graph { labels: Vec<String>, edges: Vec<(String, String, Dist)> },
    Grid { side: u32, dim: u32, norm: Norm },
    DisjointUnion { parts: Vec<SpaceDoc> },
}

impl SpaceDoc {
    /// A full matrix document for any space.
    pub fn from_space(space: &MetricSpace) -> Self {
        let n = space.len();
        SpaceDoc::Matrix {
            labels: Some(space.labels().to_vec()),
            rows: (0..n).map(|i| (0..n).map(|j| space.d(i, j)).collect()).collect(),
        }
    }

    pub fn build(&self) -> Result<MetricSpace> {
        match self {
            SpaceDoc::Matrix { labels, rows } => MetricSpace::from_matrix(labels.clone(), rows.clone()),
            SpaceDoc::Graph { labels, edges } => {
                let index: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
                let lookup = |l: &str| {
                    index.get(l).copied().ok_or_else(|| Error::BadMetric(format!("edge endpoint {l:?} is not a label")))
                };
                let edges = edges
                    .iter()
                    .map(|(u, v, w)| Ok((lookup(u)?, lookup(v)?, *w)))
                    .collect::<Result<Vec<_>>>()?;
                MetricSpace::from_graph(labels.clone(), &edges)
            }
            SpaceDoc::Grid { side, dim, norm } => MetricSpace::grid(*side, *dim, *norm),
            SpaceDoc::DisjointUnion { parts } => {
                let (first, rest) = parts
                    .split_first()
                    .ok_or_else(|| Error::BadMetric("disjoint_union needs at least one part".into()))?;
                rest.iter().try_fold(first.build()?, |acc, p| MetricSpace::disjoint_union(&acc, &p.build()?))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub prefix: Vec<Vec<u32>>,
    pub next: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StrategyDoc {
    Table {
        m: usize,
        start: usize,
        #[serde(rename = "type")]
        kind: TableTag,
        entries: Vec<TableEntry>,
    },
    Uniform {
        m: usize,
        start: usize,
        rules: Vec<NatMap>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableTag {
    Table,
}

impl StrategyDoc {
    pub fn build(&self) -> Result<Strategy> {
        match self {
            StrategyDoc::Uniform { m, start, rules } => {
                if rules.len() != *m {
                    return Err(Error::BadStrategy(format!("m = {m} but {} rules given", rules.len())));
                }
                Strategy::uniform(*start, rules.clone())
            }
            StrategyDoc::Table { m, start, entries, .. } => {
                let mut table = BTreeMap::new();
                for e in entries {
                    let prefix = e
                        .prefix
                        .iter()
                        .map(|s| FinSet::new(s.iter().copied()))
                        .collect::<Result<Vec<_>>>()?;
                    if table.insert(prefix, e.next).is_some() {
                        return Err(Error::BadStrategy(format!("duplicate prefix {:?}", e.prefix)));
                    }
                }
                Strategy::table(*m, *start, table)
            }
        }
    }

    pub fn from_strategy(s: &Strategy) -> Self {
        match s.rule() {
            Rule::Uniform(rules) => StrategyDoc::Uniform { m: s.rounds(), start: s.start(), rules: rules.clone() },
            Rule::Table(table) => StrategyDoc::Table {
                m: s.rounds(),
                start: s.start(),
                kind: TableTag::Table,
                entries: table
                    .iter()
                    .map(|(p, &next)| TableEntry { prefix: p.iter().map(|s| s.to_vec()).collect(), next })
                    .collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    pub base: u32,
    pub maps: Vec<NatMap>,
}

impl ProfileDoc {
    pub fn build(&self) -> Result<ApdProfile> {
        let p = ApdProfile::new(self.base, self.maps.clone())?;
        p.validate()?;
        Ok(p)
    }

    pub fn from_profile(p: &ApdProfile) -> Self {
        ProfileDoc { base: p.base(), maps: p.maps().to_vec() }
    }
}

/// A self-contained request; command-line flags override its fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequestDoc {
    pub op: String,
    pub space: SpaceDoc,
    #[serde(default)]
    pub scales: Option<Vec<u32>>,
    #[serde(rename = "B", default)]
    pub bound: Option<Dist>,
    #[serde(default)]
    pub n: Option<u32>,
    #[serde(default)]
    pub profile: Option<ProfileDoc>,
    #[serde(default)]
    pub tuples: Option<Vec<Vec<u32>>>,
    #[serde(default)]
    pub budget: Option<u64>,
}

/// Any input document, distinguished by shape.
#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Family(FamilyDoc),
    Space(SpaceDoc),
    Strategy(StrategyDoc),
    Profile(ProfileDoc),
    Request(Box<RequestDoc>),
}

/// Parse error with a 1-based position when the JSON itself is malformed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for DocError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
        }
    }
}

impl std::error::Error for DocError {}

impl From<serde_json::Error> for DocError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(i) if e.line() > 0 => message[..i].to_string(),
            _ => message,
        };
        DocError { line: e.line(), column: e.column(), message }
    }
}

/// Parses one document of a known type.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> std::result::Result<T, DocError> {
    Ok(serde_json::from_str(text)?)
}

/// Parses a document and classifies it by its keys.
pub fn parse_any(text: &str) -> std::result::Result<Document, DocError> {
    let value: Value = serde_json::from_str(text)?;
    let obj = value.as_object().ok_or_else(|| DocError {
        line: 1,
        column: 1,
        message: "expected a JSON object".into(),
    })?;
    let shape = |what: &str, e: serde_json::Error| DocError { line: 0, column: 0, message: format!("{what} document: {e}") };
    if obj.contains_key("op") {
        serde_json::from_value(value).map(|r| Document::Request(Box::new(r))).map_err(|e| shape("request", e))
    } else if obj.contains_key("kind") {
        serde_json::from_value(value).map(Document::Space).map_err(|e| shape("space", e))
    } else if obj.contains_key("ground") {
        serde_json::from_value(value).map(Document::Family).map_err(|e| shape("family", e))
    } else if obj.contains_key("m") {
        serde_json::from_value(value).map(Document::Strategy).map_err(|e| shape("strategy", e))
    } else if obj.contains_key("base") {
        serde_json::from_value(value).map(Document::Profile).map_err(|e| shape("profile", e))
    } else {
        Err(DocError { line: 1, column: 1, message: "unrecognized document: expected one of the keys op, kind, ground, m, base".into() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_docs() {
        let f: FamilyDoc = parse(r#"{"ground":3,"members":[[1],[2]]}"#).unwrap();
        assert_eq!(f.build().unwrap().ord().unwrap().as_natural(), Some(1));
        let o: FamilyDoc = parse(r#"{"ground":8,"oracle":"card_le_min"}"#).unwrap();
        assert!(!o.build().unwrap().is_explicit());
        assert!(parse::<FamilyDoc>(r#"{"ground":3,"members":[[4]]}"#).unwrap().build().is_err());
    }

    #[test]
    fn space_docs() {
        let s: SpaceDoc = parse(r#"{"kind":"matrix","rows":[[0,"INF"],["INF",0]]}"#).unwrap();
        assert_eq!(s.build().unwrap().d(0, 1), Dist::Infinite);
        let g: SpaceDoc = parse(r#"{"kind":"graph","labels":["a","b","c"],"edges":[["a","b",1],["b","c","3/2"]]}"#).unwrap();
        assert_eq!(g.build().unwrap().d(0, 2), Dist::ratio(5, 2).unwrap());
        let u: SpaceDoc = parse(r#"{"kind":"disjoint_union","parts":[{"kind":"grid","side":2,"dim":1,"norm":"l1"},{"kind":"grid","side":1,"dim":2,"norm":"linf"}]}"#).unwrap();
        assert_eq!(u.build().unwrap().len(), 7);
    }

    #[test]
    fn strategy_docs_round_trip() {
        for text in [
            r#"{"m":1,"start":2,"rules":[{"type":"affine","a":1,"b":0}]}"#,
            r#"{"m":1,"start":1,"type":"table","entries":[{"prefix":[[1]],"next":1},{"prefix":[[2]],"next":2}]}"#,
        ] {
            let d: StrategyDoc = parse(text).unwrap();
            let s = d.build().unwrap();
            assert_eq!(serde_json::to_string(&StrategyDoc::from_strategy(&s)).unwrap(), text);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse::<FamilyDoc>("{\n  \"ground\": 3,\n  \"members\": [[1,]\n}").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.to_string().starts_with("line 3, column"));
        assert!(matches!(parse_any(r#"{"kind":"grid","side":2,"dim":1,"norm":"l1"}"#), Ok(Document::Space(_))));
        assert!(parse_any("[1]").is_err());
    }
}
