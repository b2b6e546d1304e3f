//! Dictionary-encoded in-memory triple store with pattern-match indexes.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::term::{PrefixMap, Term, Triple};

/// Dense identifier of a term inside one store's dictionary. Ids are assigned
/// in first-seen order and are not stable across store instances; persistence
/// goes through the Turtle snapshot, not through ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(u64);

impl TermId {
    const MIN: TermId = TermId(0);
    const MAX: TermId = TermId(u64::MAX);

    pub fn as_u64(self) -> u64 {
        self.0
    }
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("unknown term id {0}")]
    UnknownTermId(u64),
}

/// In-memory triple set with a bijective term dictionary and three sorted
/// indexes over (s,p,o), (p,o,s) and (o,s,p).
///
/// Concurrency: the borrow checker enforces the one-writer-or-many-readers
/// contract, and match streams borrow the store immutably, so writes are
/// statically impossible while a stream is live (streams therefore observe
/// the store as of their creation).
#[derive(Debug, Clone, Default)]
pub struct TripleStore {
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
    spo: BTreeSet<(TermId, TermId, TermId)>,
    pos: BTreeSet<(TermId, TermId, TermId)>,
    osp: BTreeSet<(TermId, TermId, TermId)>,
    prefixes: PrefixMap,
}

impl TripleStore {
    pub fn new() -> Self {
        TripleStore { prefixes: PrefixMap::well_known(), ..TripleStore::default() }
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn add_prefixes(&mut self, prefixes: &PrefixMap) {
        self.prefixes.merge(prefixes);
    }

    /// Dictionary-encode a term, assigning a fresh id on first sight.
    pub fn encode(&mut self, term: &Term) -> TermId {
        if let Some(id) = self.ids.get(term) {
            return *id;
        }
        let id = TermId(self.terms.len() as u64);
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        id
    }

    /// Id of a term already in the dictionary.
    pub fn lookup(&self, term: &Term) -> Option<TermId> {
        self.ids.get(term).copied()
    }

    /// Decode an id back to its term; inverse of [`TripleStore::encode`].
    pub fn decode(&self, id: TermId) -> Result<&Term, StoreError> {
        self.terms.get(id.0 as usize).ok_or(StoreError::UnknownTermId(id.0))
    }

    /// Insert a triple into all three indexes. Returns whether it was new;
    /// inserting an existing triple leaves the store unchanged.
    pub fn insert(&mut self, triple: &Triple) -> bool {
        debug_assert!(!triple.subject.is_literal(), "triple subject must not be a literal");
        debug_assert!(triple.predicate.is_iri(), "triple predicate must be an IRI");
        let s = self.encode(&triple.subject);
        let p = self.encode(&triple.predicate);
        let o = self.encode(&triple.object);
        let added = self.spo.insert((s, p, o));
        if added {
            self.pos.insert((p, o, s));
            self.osp.insert((o, s, p));
        }
        added
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        match (
            self.lookup(&triple.subject),
            self.lookup(&triple.predicate),
            self.lookup(&triple.object),
        ) {
            (Some(s), Some(p), Some(o)) => self.spo.contains(&(s, p, o)),
            _ => false,
        }
    }

    /// All triples agreeing with the bound positions of the pattern. The
    /// index whose key order gives the longest bound prefix is used:
    /// s-anchored patterns use (s,p,o), (p,o)-anchored ones use (p,o,s) and
    /// o-anchored ones use (o,s,p).
    pub fn match_ids<'a>(
        &'a self,
        s: Option<TermId>,
        p: Option<TermId>,
        o: Option<TermId>,
    ) -> Box<dyn Iterator<Item = (TermId, TermId, TermId)> + 'a> {
        fn range(
            index: &BTreeSet<(TermId, TermId, TermId)>,
            first: TermId,
            second: Option<TermId>,
        ) -> std::collections::btree_set::Range<'_, (TermId, TermId, TermId)> {
            match second {
                Some(second) => index
                    .range((first, second, TermId::MIN)..=(first, second, TermId::MAX)),
                None => index.range((first, TermId::MIN, TermId::MIN)..=(first, TermId::MAX, TermId::MAX)),
            }
        }

        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                if self.spo.contains(&(s, p, o)) {
                    Box::new(std::iter::once((s, p, o)))
                } else {
                    Box::new(std::iter::empty())
                }
            }
            (Some(s), p, None) => {
                Box::new(range(&self.spo, s, p).copied())
            }
            (Some(s), None, Some(o)) => Box::new(
                range(&self.osp, o, Some(s)).map(|&(o, s, p)| (s, p, o)),
            ),
            (None, Some(p), o) => Box::new(range(&self.pos, p, o).map(|&(p, o, s)| (s, p, o))),
            (None, None, Some(o)) => Box::new(range(&self.osp, o, None).map(|&(o, s, p)| (s, p, o))),
            (None, None, None) => Box::new(self.spo.iter().copied()),
        }
    }

    /// Pattern matching over decoded terms; `None` positions are wildcards.
    /// Terms absent from the dictionary match nothing.
    pub fn match_pattern<'a>(
        &'a self,
        s: Option<&Term>,
        p: Option<&Term>,
        o: Option<&Term>,
    ) -> Box<dyn Iterator<Item = Triple> + 'a> {
        let ids = [s, p, o].map(|t| t.map(|t| self.lookup(t)));
        let mut bound = Vec::with_capacity(3);
        for slot in ids {
            match slot {
                Some(Some(id)) => bound.push(Some(id)),
                // Pattern term not in the dictionary: nothing can match.
                Some(None) => return Box::new(std::iter::empty()),
                None => bound.push(None),
            }
        }
        Box::new(
            self.match_ids(bound[0], bound[1], bound[2])
                .map(move |(s, p, o)| self.decode_triple(s, p, o)),
        )
    }

    fn decode_triple(&self, s: TermId, p: TermId, o: TermId) -> Triple {
        Triple::new(
            self.decode(s).expect("dangling subject id").clone(),
            self.decode(p).expect("dangling predicate id").clone(),
            self.decode(o).expect("dangling object id").clone(),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().map(|&(s, p, o)| self.decode_triple(s, p, o))
    }

    /// Distinct subject ids, in id-triple order.
    pub fn subject_ids(&self) -> Vec<TermId> {
        let mut out: Vec<TermId> = self.spo.iter().map(|&(s, _, _)| s).collect();
        out.dedup();
        out
    }

    /// Count of triples matching the pattern without decoding them.
    pub fn count_matches(&self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> usize {
        let ids = [s, p, o].map(|t| t.map(|t| self.lookup(t)));
        let mut bound = Vec::with_capacity(3);
        for slot in ids {
            match slot {
                Some(Some(id)) => bound.push(Some(id)),
                Some(None) => return 0,
                None => bound.push(None),
            }
        }
        self.match_ids(bound[0], bound[1], bound[2]).count()
    }

    #[cfg(test)]
    pub(crate) fn index_sets_agree(&self) -> bool {
        let from_pos: BTreeSet<_> = self.pos.iter().map(|&(p, o, s)| (s, p, o)).collect();
        let from_osp: BTreeSet<_> = self.osp.iter().map(|&(o, s, p)| (s, p, o)).collect();
        from_pos == self.spo && from_osp == self.spo
    }
}
