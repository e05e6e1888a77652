//! Domain ontology: entities with synonyms, typed relations and a rooted
//! `is_a` tree.
//!
//! The on-disk format is a JSON document
//! `{root, entities: [{id, label, synonyms, type, properties}], relations: [{subject, predicate, object}]}`.
//! Entities without an `is_a` parent hang directly under the root; if the
//! root id is not itself declared an entity, a synthetic root is created.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::Document;
use crate::text::{normalize, TokenStream};
use crate::vector::{cosine, TermVector};

pub const IS_A: &str = "is_a";
pub const PART_OF: &str = "part_of";
pub const LOCATED_IN: &str = "located_in";

/// Root id used when the file does not name one.
pub const SYNTHETIC_ROOT: &str = "__root__";

const BUILTIN_ONTOLOGY: &str = include_str!("../data/ontology.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub id: String,
    pub label: String,
    #[serde(default)]
    pub synonyms: Vec<String>,
    #[serde(rename = "type", default)]
    pub entity_type: String,
    #[serde(default)]
    pub properties: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct OntologyFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root: Option<String>,
    #[serde(default)]
    entities: Vec<Entity>,
    #[serde(default)]
    relations: Vec<Relation>,
}

#[derive(Debug, Clone)]
pub struct Ontology {
    root: String,
    entities: BTreeMap<String, Entity>,
    relations: Vec<Relation>,
    parent: HashMap<String, String>,
    children: HashMap<String, Vec<String>>,
    depth: HashMap<String, usize>,
    by_term: HashMap<String, Vec<String>>,
}

impl PartialEq for Ontology {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root && self.entities == other.entities && self.relations == other.relations
    }
}

/// Read and validate an ontology file.
pub fn load_ontology(path: impl AsRef<Path>) -> Result<Ontology> {
    let path = path.as_ref();
    let source = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ontology::from_json(&source)
}

fn term_key(s: &str) -> String {
    normalize(&s.split_whitespace().collect::<Vec<_>>().join(" "))
}

impl Ontology {
    pub fn from_json(source: &str) -> Result<Self> {
        let file: OntologyFile =
            serde_json::from_str(source).map_err(|e| Error::OntologyParse(e.to_string()))?;
        Ontology::build(file.root, file.entities, file.relations)
    }

    /// The sample Cambodian tourism ontology bundled with the crate.
    pub fn builtin() -> Self {
        Ontology::from_json(BUILTIN_ONTOLOGY).expect("bundled ontology is valid")
    }

    pub fn new(root: Option<String>, entities: Vec<Entity>, relations: Vec<Relation>) -> Result<Self> {
        Ontology::build(root, entities, relations)
    }

    fn build(root: Option<String>, entities: Vec<Entity>, relations: Vec<Relation>) -> Result<Self> {
        let root = root.unwrap_or_else(|| SYNTHETIC_ROOT.to_string());
        let mut map = BTreeMap::new();
        for e in entities {
            validate_entity(&e)?;
            if map.contains_key(&e.id) {
                return Err(Error::InvalidOntology(format!("duplicate entity id `{}`", e.id)));
            }
            map.insert(e.id.clone(), e);
        }
        map.entry(root.clone()).or_insert_with(|| Entity {
            id: root.clone(),
            label: root.clone(),
            synonyms: Vec::new(),
            entity_type: "root".into(),
            properties: BTreeMap::new(),
        });

        let mut parents: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for r in &relations {
            for id in [&r.subject, &r.object] {
                if !map.contains_key(id) {
                    return Err(Error::DanglingEndpoint {
                        id: id.clone(),
                        predicate: r.predicate.clone(),
                    });
                }
            }
            if (r.predicate == IS_A || r.predicate == PART_OF) && r.subject == r.object {
                return Err(Error::InvalidOntology(format!(
                    "self-loop {} on `{}`",
                    r.predicate, r.subject
                )));
            }
            if r.predicate == IS_A {
                let ps = parents.entry(&r.subject).or_default();
                if !ps.contains(&r.object.as_str()) {
                    ps.push(&r.object);
                }
            }
        }

        let mut parent = HashMap::new();
        for (child, ps) in &parents {
            if ps.len() > 1 {
                return Err(Error::MultipleParents {
                    id: child.to_string(),
                    parents: ps.iter().map(|p| p.to_string()).collect(),
                });
            }
            if *child == root {
                return Err(Error::InvalidOntology(format!(
                    "root `{root}` cannot have an is_a parent"
                )));
            }
            parent.insert(child.to_string(), ps[0].to_string());
        }
        for id in map.keys() {
            if *id != root && !parent.contains_key(id) {
                parent.insert(id.clone(), root.clone());
            }
        }

        let mut depth: HashMap<String, usize> = HashMap::new();
        depth.insert(root.clone(), 1);
        for id in map.keys() {
            let mut chain = Vec::new();
            let mut cur = id.as_str();
            while !depth.contains_key(cur) {
                if chain.contains(&cur) {
                    return Err(Error::IsACycle(cur.to_string()));
                }
                chain.push(cur);
                cur = &parent[cur];
            }
            let mut d = depth[cur];
            for node in chain.into_iter().rev() {
                d += 1;
                depth.insert(node.to_string(), d);
            }
        }

        let mut children: HashMap<String, Vec<String>> = HashMap::new();
        for (c, p) in &parent {
            children.entry(p.clone()).or_default().push(c.clone());
        }
        for v in children.values_mut() {
            v.sort();
        }

        let mut by_term: HashMap<String, Vec<String>> = HashMap::new();
        for e in map.values() {
            for name in std::iter::once(&e.label).chain(&e.synonyms) {
                let ids = by_term.entry(term_key(name)).or_default();
                if !ids.contains(&e.id) {
                    ids.push(e.id.clone());
                }
            }
        }

        Ok(Ontology {
            root,
            entities: map,
            relations,
            parent,
            children,
            depth,
            by_term,
        })
    }

    pub fn to_json(&self) -> String {
        let file = OntologyFile {
            root: Some(self.root.clone()),
            entities: self.entities.values().cloned().collect(),
            relations: self.relations.clone(),
        };
        serde_json::to_string_pretty(&file).expect("ontology serializes")
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn entities(&self) -> impl Iterator<Item = &Entity> {
        self.entities.values()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn entity(&self, id: &str) -> Option<&Entity> {
        self.entities.get(id)
    }

    fn require(&self, id: &str) -> Result<&Entity> {
        self.entities
            .get(id)
            .ok_or_else(|| Error::UnknownEntity(id.to_string()))
    }

    pub fn parent(&self, id: &str) -> Option<&str> {
        self.parent.get(id).map(String::as_str)
    }

    pub fn children(&self, id: &str) -> &[String] {
        self.children.get(id).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Depth in the `is_a` tree; the root has depth 1.
    pub fn depth(&self, id: &str) -> Result<usize> {
        self.require(id)?;
        Ok(self.depth[id])
    }

    /// `id` followed by its ancestors up to the root.
    pub fn ancestors(&self, id: &str) -> Result<Vec<&str>> {
        let mut chain = vec![self.require(id)?.id.as_str()];
        let mut cur = id;
        while let Some(p) = self.parent.get(cur) {
            chain.push(p);
            cur = p;
        }
        Ok(chain)
    }

    pub fn is_descendant_or_self(&self, id: &str, ancestor: &str) -> bool {
        let mut cur = id;
        loop {
            if cur == ancestor {
                return true;
            }
            match self.parent.get(cur) {
                Some(p) => cur = p,
                None => return false,
            }
        }
    }

    /// Entity ids whose label or a synonym normalizes to `term`.
    pub fn lookup_term(&self, term: &str) -> &[String] {
        self.by_term.get(term).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Entities reachable by following `located_in`/`part_of` outward.
    pub fn location_context(&self, id: &str) -> BTreeSet<&str> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(cur) = stack.pop() {
            for r in &self.relations {
                if r.subject == cur
                    && (r.predicate == LOCATED_IN || r.predicate == PART_OF)
                    && seen.insert(r.object.as_str())
                {
                    stack.push(&r.object);
                }
            }
        }
        seen
    }

    /// True for entities that something is located in or part of.
    pub fn is_location(&self, id: &str) -> bool {
        self.relations
            .iter()
            .any(|r| r.object == id && (r.predicate == LOCATED_IN || r.predicate == PART_OF))
    }

    pub fn is_class(&self, id: &str) -> bool {
        !self.children(id).is_empty()
    }

    pub fn lcs(&self, a: &str, b: &str) -> Result<&str> {
        let chain_a = self.ancestors(a)?;
        self.require(b)?;
        let mut cur = b;
        loop {
            if chain_a.contains(&cur) {
                return Ok(self.entities.get_key_value(cur).map(|(k, _)| k.as_str()).unwrap());
            }
            cur = &self.parent[cur];
        }
    }

    pub fn wu_palmer(&self, a: &str, b: &str) -> Result<f64> {
        let common = self.lcs(a, b)?;
        let d = self.depth[common] as f64;
        Ok(2.0 * d / ((self.depth(a)? + self.depth(b)?) as f64))
    }
}

fn validate_entity(e: &Entity) -> Result<()> {
    if e.id.is_empty() {
        return Err(Error::InvalidOntology("entity with empty id".into()));
    }
    if e.label.trim().is_empty() {
        return Err(Error::InvalidOntology(format!("entity `{}` has an empty label", e.id)));
    }
    let mut seen = BTreeSet::new();
    for s in &e.synonyms {
        if s.trim().is_empty() || *s == e.label || !seen.insert(s) {
            return Err(Error::InvalidOntology(format!(
                "entity `{}` has an empty, duplicate or label-equal synonym {s:?}",
                e.id
            )));
        }
    }
    Ok(())
}

/// Deepest common `is_a` ancestor-or-self of `a` and `b`.
pub fn lcs<'o>(a: &str, b: &str, ont: &'o Ontology) -> Result<&'o str> {
    ont.lcs(a, b)
}

/// `2 * depth(lcs) / (depth(a) + depth(b))` with the root at depth 1.
pub fn wu_palmer(a: &str, b: &str, ont: &Ontology) -> Result<f64> {
    ont.wu_palmer(a, b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryTerm {
    pub term: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    pub term: String,
    pub weight: f64,
    /// Entity the term was derived from.
    pub entity: String,
    /// How it was reached: `label`, `synonym`, `is_a`, or a relation predicate.
    pub relation: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExpandedQuery {
    pub original_terms: Vec<QueryTerm>,
    pub expansion_terms: Vec<ExpansionTerm>,
}

impl ExpandedQuery {
    /// The query terms alone, weight 1.0, deduplicated in order.
    pub fn from_tokens(ts: &TokenStream) -> Self {
        let mut original_terms: Vec<QueryTerm> = Vec::new();
        for t in ts {
            if !original_terms.iter().any(|q| q.term == t.normalized) {
                original_terms.push(QueryTerm {
                    term: t.normalized.clone(),
                    weight: 1.0,
                });
            }
        }
        ExpandedQuery {
            original_terms,
            expansion_terms: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.original_terms.is_empty()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.original_terms.iter().any(|q| q.term == term)
            || self.expansion_terms.iter().any(|q| q.term == term)
    }

    /// Every term with its weight, originals first.
    pub fn terms(&self) -> impl Iterator<Item = (&str, f64)> {
        self.original_terms
            .iter()
            .map(|q| (q.term.as_str(), q.weight))
            .chain(self.expansion_terms.iter().map(|q| (q.term.as_str(), q.weight)))
    }

    pub fn weights(&self) -> TermVector {
        self.terms().map(|(t, w)| (t.to_string(), w)).collect()
    }

    fn push_expansion(&mut self, label: &str, weight: f64, entity: &str, relation: &str) {
        let term = term_key(label);
        if term.is_empty() || self.contains(&term) {
            return;
        }
        self.expansion_terms.push(ExpansionTerm {
            term,
            weight,
            entity: entity.to_string(),
            relation: relation.to_string(),
        });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExpansionConfig {
    pub enabled: bool,
    /// Weight of expansion terms; must lie in (0, 1).
    pub weight: f64,
    /// How many `is_a` levels below a matched entity to include.
    pub hyponym_depth: usize,
}

impl Default for ExpansionConfig {
    fn default() -> Self {
        ExpansionConfig {
            enabled: true,
            weight: 0.5,
            hyponym_depth: 1,
        }
    }
}

impl ExpansionConfig {
    pub fn disabled() -> Self {
        ExpansionConfig {
            enabled: false,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.weight > 0.0 && self.weight < 1.0) {
            return Err(Error::Config(format!(
                "expansion weight must lie in (0, 1), got {}",
                self.weight
            )));
        }
        Ok(())
    }
}

/// Expand query terms with ontology synonyms, hyponyms and related
/// entities.
///
/// Candidates reached from one matched entity must agree with the other
/// entities the query mentions: when the query names a location, a
/// candidate with a known location must lie in it; when it names a class, a
/// related (non-hyponym) candidate must belong to that class.
pub fn expand_query(ts: &TokenStream, ont: &Ontology, config: &ExpansionConfig) -> ExpandedQuery {
    let mut eq = ExpandedQuery::from_tokens(ts);
    if !config.enabled {
        return eq;
    }
    let weight = config.weight.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);

    let mut matched: Vec<(String, &str)> = Vec::new();
    for q in &eq.original_terms {
        for id in ont.lookup_term(&q.term) {
            if !matched.iter().any(|(_, m)| *m == id.as_str()) {
                matched.push((q.term.clone(), id));
            }
        }
    }

    for (term, id) in &matched {
        let entity = &ont.entities[*id];
        let locations: Vec<&str> = matched
            .iter()
            .map(|(_, m)| *m)
            .filter(|m| m != id && ont.is_location(m))
            .collect();
        let classes: Vec<&str> = matched
            .iter()
            .map(|(_, m)| *m)
            .filter(|m| m != id && ont.is_class(m))
            .collect();
        let location_ok = |x: &str| {
            if locations.is_empty() || locations.contains(&x) {
                return true;
            }
            let ctx = ont.location_context(x);
            ctx.is_empty() || locations.iter().any(|l| ctx.contains(l))
        };
        let class_ok =
            |x: &str| classes.is_empty() || classes.iter().any(|c| ont.is_descendant_or_self(x, c));

        if term_key(&entity.label) != *term {
            eq.push_expansion(&entity.label, weight, id, "label");
        }
        for s in &entity.synonyms {
            eq.push_expansion(s, weight, id, "synonym");
        }

        let mut frontier: Vec<&str> = vec![id];
        for _ in 0..config.hyponym_depth {
            let next: Vec<&str> = frontier
                .iter()
                .flat_map(|f| ont.children(f).iter().map(String::as_str))
                .collect();
            for x in &next {
                if location_ok(x) {
                    eq.push_expansion(&ont.entities[*x].label, weight, x, IS_A);
                }
            }
            frontier = next;
        }

        for r in ont.relations() {
            if r.predicate == IS_A || r.predicate == PART_OF {
                continue;
            }
            let other = if r.subject == *id {
                &r.object
            } else if r.object == *id {
                &r.subject
            } else {
                continue;
            };
            if location_ok(other) && class_ok(other) {
                eq.push_expansion(&ont.entities[other].label, weight, other, &r.predicate);
            }
        }
    }
    eq
}

/// Cosine between the weighted query vector and the document's term
/// frequencies over title and body together.
pub fn semantic_similarity(eq: &ExpandedQuery, doc: &Document) -> f64 {
    let total = doc.title_tokens.len() + doc.body_tokens.len();
    if total == 0 {
        return 0.0;
    }
    let mut tf: TermVector = BTreeMap::new();
    for t in doc.title_tokens.iter().chain(doc.body_tokens.iter()) {
        *tf.entry(t.normalized.clone()).or_insert(0.0) += 1.0;
    }
    for w in tf.values_mut() {
        *w /= total as f64;
    }
    cosine(&eq.weights(), &tf)
}
