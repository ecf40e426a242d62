//! Documents, domains and the domain-level link graph.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result, Warning};
use crate::text::tokenize;

/// Structural region of a document that carries its own rank weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    Url,
    Title,
    Meta,
    Header,
    Anchor,
    Body,
}

impl ElementKind {
    pub const ALL: [ElementKind; 6] = [
        ElementKind::Url,
        ElementKind::Title,
        ElementKind::Meta,
        ElementKind::Header,
        ElementKind::Anchor,
        ElementKind::Body,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ElementKind::Url => "url",
            ElementKind::Title => "title",
            ElementKind::Meta => "meta",
            ElementKind::Header => "header",
            ElementKind::Anchor => "anchor",
            ElementKind::Body => "body",
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ElementKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ElementKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnknownElementKind(s.to_string()))
    }
}

/// Tokenized text of one format element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatElement {
    kind: ElementKind,
    tokens: Vec<String>,
}

impl FormatElement {
    pub fn new(kind: ElementKind, text: &str) -> Self {
        FormatElement {
            kind,
            tokens: tokenize(text),
        }
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Number of occurrences of `keyword`.
    pub fn occurrences(&self, keyword: &str) -> usize {
        self.tokens.iter().filter(|t| *t == keyword).count()
    }

    /// Original text reassembled from tokens.
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    url: String,
    domain: String,
    elements: BTreeMap<ElementKind, FormatElement>,
    outlinks: BTreeSet<String>,
}

impl Document {
    pub fn new(url: impl Into<String>, domain: impl Into<String>) -> Self {
        Document {
            url: url.into(),
            domain: domain.into(),
            elements: BTreeMap::new(),
            outlinks: BTreeSet::new(),
        }
    }

    /// Sets (or replaces) the text of one element.
    pub fn with_element(mut self, kind: ElementKind, text: &str) -> Self {
        self.elements.insert(kind, FormatElement::new(kind, text));
        self
    }

    pub fn with_outlink(mut self, target: impl Into<String>) -> Self {
        self.outlinks.insert(target.into());
        self
    }

    pub fn url(&self) -> &str {
        &self.url
    }

    pub fn domain(&self) -> &str {
        &self.domain
    }

    pub fn element(&self, kind: ElementKind) -> Option<&FormatElement> {
        self.elements.get(&kind)
    }

    pub fn elements(&self) -> impl Iterator<Item = &FormatElement> {
        self.elements.values()
    }

    pub fn outlinks(&self) -> &BTreeSet<String> {
        &self.outlinks
    }

    pub fn keyword_density(&self, keyword: &str, kind: ElementKind) -> f64 {
        keyword_density(self, keyword, kind)
    }
}

/// Fraction of the tokens of element `kind` equal to `keyword`.
///
/// Absent or empty elements have density 0.
pub fn keyword_density(doc: &Document, keyword: &str, kind: ElementKind) -> f64 {
    match doc.element(kind) {
        Some(e) if !e.is_empty() => e.occurrences(keyword) as f64 / e.len() as f64,
        _ => 0.0,
    }
}

/// Documents under a common editorial responsibility, ordered by url.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    name: String,
    documents: Vec<Document>,
}

impl Domain {
    pub fn new(name: impl Into<String>, mut documents: Vec<Document>) -> Self {
        documents.sort_by(|a, b| a.url.cmp(&b.url));
        Domain {
            name: name.into(),
            documents,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    /// Number of documents in the domain.
    pub fn n_k(&self) -> usize {
        self.documents.len()
    }
}

/// Directed domain-level graph built from document outlinks.
///
/// Edge multiplicity counts the documents of the source domain that link to
/// the target. Self-loops are recorded but never reported as in-links or
/// counted in out-degrees.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinkGraph {
    edges: BTreeMap<String, BTreeMap<String, usize>>,
    incoming: BTreeMap<String, BTreeSet<String>>,
    external: BTreeSet<String>,
}

impl LinkGraph {
    fn add(&mut self, source: &str, target: &str) {
        *self
            .edges
            .entry(source.to_string())
            .or_default()
            .entry(target.to_string())
            .or_insert(0) += 1;
        if source != target {
            self.incoming
                .entry(target.to_string())
                .or_default()
                .insert(source.to_string());
        }
    }

    /// Number of distinct (source, target) pairs, self-loops included.
    pub fn edge_count(&self) -> usize {
        self.edges.values().map(BTreeMap::len).sum()
    }

    pub fn multiplicity(&self, source: &str, target: &str) -> usize {
        self.edges
            .get(source)
            .and_then(|t| t.get(target))
            .copied()
            .unwrap_or(0)
    }

    /// Distinct non-self targets of `source`.
    pub fn targets<'a>(&'a self, source: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.edges
            .get(source)
            .into_iter()
            .flat_map(|t| t.keys())
            .map(String::as_str)
            .filter(move |t| *t != source)
    }

    pub fn out_degree(&self, source: &str) -> usize {
        self.targets(source).count()
    }

    /// Distinct non-self sources linking into `target`, in name order.
    pub fn sources<'a>(&'a self, target: &str) -> impl Iterator<Item = &'a str> + 'a {
        self.incoming
            .get(target)
            .into_iter()
            .flat_map(|s| s.iter())
            .map(String::as_str)
    }

    pub fn in_degree(&self, target: &str) -> usize {
        self.incoming.get(target).map_or(0, BTreeSet::len)
    }

    pub fn is_external(&self, name: &str) -> bool {
        self.external.contains(name)
    }

    /// Link targets that have no documents in the corpus.
    pub fn external(&self) -> &BTreeSet<String> {
        &self.external
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    domains: BTreeMap<String, Domain>,
    links: LinkGraph,
}

impl Corpus {
    /// Groups documents by domain and derives the link graph.
    ///
    /// Outlinks to domains without documents are kept; their targets are
    /// marked external and reported as warnings.
    pub fn from_documents<I>(documents: I) -> Result<(Corpus, Vec<Warning>)>
    where
        I: IntoIterator<Item = Document>,
    {
        let mut seen = BTreeSet::new();
        let mut grouped: BTreeMap<String, Vec<Document>> = BTreeMap::new();
        for (index, doc) in documents.into_iter().enumerate() {
            if doc.url.is_empty() {
                return Err(Error::invalid("document", "empty url"));
            }
            if doc.domain.is_empty() {
                return Err(Error::invalid("document", "empty domain name"));
            }
            if !seen.insert(doc.url.clone()) {
                return Err(Error::DuplicateUrl {
                    url: doc.url,
                    index,
                });
            }
            grouped.entry(doc.domain.clone()).or_default().push(doc);
        }

        let mut links = LinkGraph::default();
        for (name, docs) in &grouped {
            for doc in docs {
                for target in &doc.outlinks {
                    links.add(name, target);
                }
            }
        }
        let mut warnings = Vec::new();
        let targets: BTreeSet<&String> = links.edges.values().flat_map(|t| t.keys()).collect();
        for target in targets {
            if !grouped.contains_key(target) {
                links.external.insert(target.clone());
                warnings.push(Warning::ExternalTarget {
                    target: target.clone(),
                });
            }
        }

        let domains = grouped
            .into_iter()
            .map(|(name, docs)| (name.clone(), Domain::new(name, docs)))
            .collect();
        Ok((Corpus { domains, links }, warnings))
    }

    pub fn domains(&self) -> impl Iterator<Item = &Domain> {
        self.domains.values()
    }

    pub fn domain(&self, name: &str) -> Option<&Domain> {
        self.domains.get(name)
    }

    pub fn n_domains(&self) -> usize {
        self.domains.len()
    }

    pub fn documents(&self) -> impl Iterator<Item = &Document> {
        self.domains.values().flat_map(|d| d.documents.iter())
    }

    pub fn n_documents(&self) -> usize {
        self.domains.values().map(Domain::n_k).sum()
    }

    pub fn link_graph(&self) -> &LinkGraph {
        &self.links
    }

    /// Every graph node: domains with documents plus external targets, sorted.
    pub fn node_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self
            .domains
            .keys()
            .chain(self.links.external.iter())
            .map(String::as_str)
            .collect();
        names.sort_unstable();
        names
    }

    pub fn contains_node(&self, name: &str) -> bool {
        self.domains.contains_key(name) || self.links.is_external(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn doc(url: &str, domain: &str) -> Document {
        Document::new(url, domain).with_element(ElementKind::Body, "free mp3 free download")
    }

    #[test]
    fn element_kind_round_trips_names() {
        for kind in ElementKind::ALL {
            assert_eq!(kind.as_str().parse::<ElementKind>().unwrap(), kind);
        }
        assert_eq!(
            "footer".parse::<ElementKind>(),
            Err(Error::UnknownElementKind("footer".into()))
        );
    }

    #[test]
    fn density_counts_within_one_element() {
        let d = doc("http://a/1", "a");
        assert_eq!(keyword_density(&d, "free", ElementKind::Body), 0.5);
        assert_eq!(keyword_density(&d, "mp3", ElementKind::Body), 0.25);
        assert_eq!(keyword_density(&d, "lyrics", ElementKind::Body), 0.0);
        assert_eq!(keyword_density(&d, "free", ElementKind::Title), 0.0);
        let empty = Document::new("http://a/2", "a").with_element(ElementKind::Title, " ,, ");
        assert_eq!(keyword_density(&empty, "free", ElementKind::Title), 0.0);
    }

    #[test]
    fn groups_two_urls_into_one_domain() {
        let (c, w) = Corpus::from_documents(vec![doc("http://a/1", "a"), doc("http://a/2", "a")])
            .unwrap();
        assert!(w.is_empty());
        assert_eq!(c.n_domains(), 1);
        assert_eq!(c.domain("a").unwrap().n_k(), 2);
    }

    #[test]
    fn duplicate_url_is_rejected() {
        let err = Corpus::from_documents(vec![doc("http://a/1", "a"), doc("http://a/1", "a")])
            .unwrap_err();
        assert_eq!(
            err,
            Error::DuplicateUrl {
                url: "http://a/1".into(),
                index: 1
            }
        );
    }

    #[test]
    fn external_targets_are_kept_and_reported() {
        let docs = vec![doc("http://a/1", "a").with_outlink("nowhere")];
        let (c, w) = Corpus::from_documents(docs).unwrap();
        assert_eq!(
            w,
            vec![Warning::ExternalTarget {
                target: "nowhere".into()
            }]
        );
        assert!(c.link_graph().is_external("nowhere"));
        assert_eq!(c.link_graph().in_degree("nowhere"), 1);
        assert_eq!(c.node_names(), ["a", "nowhere"]);
    }

    #[test]
    fn link_graph_collapses_edges_but_keeps_multiplicity() {
        let docs = vec![
            doc("http://a/1", "a").with_outlink("b").with_outlink("a"),
            doc("http://a/2", "a").with_outlink("b"),
            doc("http://b/1", "b").with_outlink("a"),
        ];
        let (c, _) = Corpus::from_documents(docs).unwrap();
        let g = c.link_graph();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.multiplicity("a", "b"), 2);
        assert_eq!(g.multiplicity("a", "a"), 1);
        assert_eq!(g.out_degree("a"), 1);
        assert_eq!(g.sources("a").collect::<Vec<_>>(), ["b"]);
    }

    #[test]
    fn documents_are_ordered_by_url() {
        let (c, _) = Corpus::from_documents(vec![doc("http://a/2", "a"), doc("http://a/1", "a")])
            .unwrap();
        let urls: Vec<_> = c.documents().map(Document::url).collect();
        assert_eq!(urls, ["http://a/1", "http://a/2"]);
    }
}
