//! Finite posets and meet/join semilattices built from cover relations.
//!
//! A [`Lattice`] stores its elements in a topological order (smaller elements
//! first) and keeps the full order relation as one bit-row per element in
//! both directions. Every numeric algorithm in this crate indexes into that
//! order.
//!
//! The meet/join "variant" used by the signal-processing layers is handled
//! through the `*_v` helpers: the join variant is the meet construction on
//! the reversed order.

use std::cmp::Reverse;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::signal::{Domain, LatticeKey, Variant};

const NONE: u32 = u32::MAX;

/// Lattices up to this size cache full meet/join tables after verification.
pub const TABLE_CAP: usize = 2048;

/// Order structure that an operation can require.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    Poset,
    MeetSemilattice,
    JoinSemilattice,
    Lattice,
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Structure::Poset => "poset",
            Structure::MeetSemilattice => "meet-semilattice",
            Structure::JoinSemilattice => "join-semilattice",
            Structure::Lattice => "lattice",
        })
    }
}

impl Structure {
    pub fn for_variant(variant: Variant) -> Structure {
        match variant {
            Variant::Meet => Structure::MeetSemilattice,
            Variant::Join => Structure::JoinSemilattice,
        }
    }
}

/// Verified structure of a poset. Every lattice value is at least a poset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Kind {
    pub meet: bool,
    pub join: bool,
}

impl Kind {
    pub fn structure(self) -> Structure {
        match (self.meet, self.join) {
            (true, true) => Structure::Lattice,
            (true, false) => Structure::MeetSemilattice,
            (false, true) => Structure::JoinSemilattice,
            (false, false) => Structure::Poset,
        }
    }

    pub fn has(self, variant: Variant) -> bool {
        match variant {
            Variant::Meet => self.meet,
            Variant::Join => self.join,
        }
    }
}

/// Result of a semilattice check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    /// A pair without a unique greatest lower (least upper) bound.
    Witness(usize, usize),
}

/// A set of elements of one lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementSet {
    key: LatticeKey,
    bits: BitSet,
}

impl ElementSet {
    pub fn empty(lattice: &Lattice) -> Self {
        ElementSet {
            key: lattice.key(),
            bits: BitSet::new(lattice.len()),
        }
    }

    pub fn from_indices(lattice: &Lattice, indices: impl IntoIterator<Item = usize>) -> Self {
        ElementSet {
            key: lattice.key(),
            bits: BitSet::from_indices(lattice.len(), indices),
        }
    }

    pub fn from_ids<S: AsRef<str>>(lattice: &Lattice, ids: &[S]) -> Result<Self> {
        let idx = ids
            .iter()
            .map(|s| lattice.index_of(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_indices(lattice, idx))
    }

    pub fn key(&self) -> LatticeKey {
        self.key
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.bits.insert(i)
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Members in topological order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &ElementSet) -> Result<()> {
        if self.key != other.key {
            return Err(Error::LatticeMismatch);
        }
        self.bits.union_with(&other.bits);
        Ok(())
    }

    pub fn ids<'a>(&'a self, lattice: &'a Lattice) -> Vec<&'a str> {
        self.iter().map(|i| lattice.id(i)).collect()
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }
}

/// Elements encoded as subsets of the join-irreducibles (bitwise AND = meet).
#[derive(Clone, Debug)]
pub struct SubsetEmbedding {
    /// Join-irreducible elements, topologically ordered; bit `i` stands for `generators[i]`.
    pub generators: Vec<usize>,
    /// Code of every element.
    pub codes: Vec<BitSet>,
}

/// A finite poset, verified for meet/join semilattice structure.
#[derive(Clone)]
pub struct Lattice {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    down: Vec<BitSet>,
    up: Vec<BitSet>,
    kind: Kind,
    meet_table: Option<Vec<u32>>,
    join_table: Option<Vec<u32>>,
    meet_irr: Vec<usize>,
    join_irr: Vec<usize>,
    key: LatticeKey,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("kind", &self.kind.structure())
            .field("elements", &self.ids)
            .field("covers", &self.covers_by_id())
            .finish()
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.lower == other.lower
    }
}

impl Domain for Lattice {
    fn key(&self) -> LatticeKey {
        self.key
    }
    fn size(&self) -> usize {
        self.ids.len()
    }
}

/// Stable Kahn sort of `n` nodes given lower neighbours; ties go to the
/// smaller input position. Returns the order or a node on a cycle.
fn topo_sort(n: usize, lower: &[Vec<usize>]) -> std::result::Result<Vec<usize>, usize> {
    let mut pending: Vec<usize> = lower.iter().map(Vec::len).collect();
    let mut upper = vec![Vec::new(); n];
    for (u, ls) in lower.iter().enumerate() {
        for &l in ls {
            upper[l].push(u);
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&i| pending[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &u in &upper[i] {
            pending[u] -= 1;
            if pending[u] == 0 {
                ready.push(Reverse(u));
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&i| pending[i] > 0).unwrap_or(0);
        return Err(stuck);
    }
    Ok(order)
}

fn index_ids<S: AsRef<str>>(elements: &[S]) -> Result<(Vec<String>, HashMap<String, usize>)> {
    let mut index = HashMap::with_capacity(elements.len());
    let mut ids = Vec::with_capacity(elements.len());
    for (i, e) in elements.iter().enumerate() {
        let id = e.as_ref().to_string();
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::DuplicateElement(id));
        }
        ids.push(id);
    }
    Ok((ids, index))
}

fn resolve(index: &HashMap<String, usize>, id: &str) -> Result<usize> {
    index
        .get(id)
        .copied()
        .ok_or_else(|| Error::UnknownElement(id.to_string()))
}

impl Lattice {
    /// Builds a poset from its cover relation and verifies semilattice structure.
    ///
    /// `covers` holds `(upper, lower)` pairs. Edges implied by transitivity of
    /// the others are rejected; use [`Lattice::from_edges_reduced`] to accept
    /// arbitrary order edges.
    pub fn from_covers<S: AsRef<str>, T: AsRef<str>>(elements: &[S], covers: &[(T, T)]) -> Result<Lattice> {
        let (ids, index) = index_ids(elements)?;
        let n = ids.len();
        let mut lower_in = vec![Vec::new(); n];
        for (u, l) in covers {
            let (u, l) = (resolve(&index, u.as_ref())?, resolve(&index, l.as_ref())?);
            if lower_in[u].contains(&l) {
                return Err(Error::NonCoverEdge {
                    upper: ids[u].clone(),
                    lower: ids[l].clone(),
                });
            }
            lower_in[u].push(l);
        }
        let order = topo_sort(n, &lower_in).map_err(|i| Error::CycleDetected(ids[i].clone()))?;
        let (ids, lower) = relabel(&ids, &lower_in, &order);
        let down = closure(&lower);
        for (x, ls) in lower.iter().enumerate() {
            if ls.len() < 2 {
                continue;
            }
            for &l in ls {
                if ls.iter().any(|&o| o != l && down[o].contains(l)) {
                    return Err(Error::NonCoverEdge {
                        upper: ids[x].clone(),
                        lower: ids[l].clone(),
                    });
                }
            }
        }
        Ok(Self::assemble(ids, lower, down, None))
    }

    /// Builds a poset from arbitrary order edges `(greater, smaller)`,
    /// reducing them to the cover relation.
    pub fn from_edges_reduced<S: AsRef<str>, T: AsRef<str>>(elements: &[S], edges: &[(T, T)]) -> Result<Lattice> {
        let (ids, index) = index_ids(elements)?;
        let n = ids.len();
        let mut lower_in = vec![Vec::new(); n];
        for (u, l) in edges {
            let (u, l) = (resolve(&index, u.as_ref())?, resolve(&index, l.as_ref())?);
            if !lower_in[u].contains(&l) {
                lower_in[u].push(l);
            }
        }
        let order = topo_sort(n, &lower_in).map_err(|i| Error::CycleDetected(ids[i].clone()))?;
        let (ids, candidates) = relabel(&ids, &lower_in, &order);
        let down = closure(&candidates);
        let lower = candidates
            .iter()
            .map(|ls| {
                let mut strict = BitSet::new(n);
                for &l in ls {
                    let mut below = down[l].clone();
                    below.remove(l);
                    strict.union_with(&below);
                }
                ls.iter().copied().filter(|&l| !strict.contains(l)).collect()
            })
            .collect();
        Ok(Self::assemble(ids, lower, down, None))
    }

    /// Builds a poset from topologically sorted ids and their down-sets
    /// (`down[x]` contains `x` and everything below it). With `trusted_lattice`
    /// the caller vouches for lattice structure and verification is skipped.
    pub(crate) fn from_down_sets(ids: Vec<String>, down: Vec<BitSet>, trusted_lattice: bool) -> Lattice {
        let n = ids.len();
        let lower = (0..n)
            .map(|x| {
                let mut strict = down[x].clone();
                strict.remove(x);
                let mut covers = Vec::new();
                let mut covered = BitSet::new(n);
                let members: Vec<usize> = strict.iter().collect();
                for &z in members.iter().rev() {
                    if !covered.contains(z) {
                        covers.push(z);
                        covered.union_with(&down[z]);
                    }
                }
                covers.sort_unstable();
                covers
            })
            .collect();
        let trusted = trusted_lattice.then_some(Kind { meet: true, join: true });
        Self::assemble(ids, lower, down, trusted)
    }

    /// Builds from topologically sorted ids and sorted lower covers whose
    /// lattice structure is known by construction; skips verification.
    pub(crate) fn from_trusted_lattice(ids: Vec<String>, lower: Vec<Vec<usize>>) -> Lattice {
        let down = closure(&lower);
        Self::assemble(ids, lower, down, Some(Kind { meet: true, join: true }))
    }

    /// Replaces the fingerprint, for lattices identified by a generating spec.
    pub(crate) fn with_key(mut self, key: LatticeKey) -> Lattice {
        self.key = key;
        self
    }

    fn assemble(ids: Vec<String>, mut lower: Vec<Vec<usize>>, down: Vec<BitSet>, trusted: Option<Kind>) -> Lattice {
        let n = ids.len();
        for ls in &mut lower {
            ls.sort_unstable();
        }
        let mut upper = vec![Vec::new(); n];
        for (x, ls) in lower.iter().enumerate() {
            for &l in ls {
                upper[l].push(x);
            }
        }
        let mut up: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for x in (0..n).rev() {
            let mut row = BitSet::new(n);
            row.insert(x);
            for &u in &upper[x] {
                row.union_with(&up[u]);
            }
            up[x] = row;
        }
        let index = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let key = fingerprint(&ids, &lower);
        let mut lat = Lattice {
            ids,
            index,
            lower,
            upper,
            down,
            up,
            kind: Kind::default(),
            meet_table: None,
            join_table: None,
            meet_irr: Vec::new(),
            join_irr: Vec::new(),
            key,
        };
        match trusted {
            Some(kind) => lat.kind = kind,
            None => {
                if let Ok(table) = lat.meet_rows(Variant::Meet) {
                    lat.kind.meet = true;
                    lat.meet_table = table;
                }
                if let Ok(table) = lat.meet_rows(Variant::Join) {
                    lat.kind.join = true;
                    lat.join_table = table;
                }
            }
        }
        lat.meet_irr = lat.irreducible_indices(Variant::Meet);
        lat.join_irr = lat.irreducible_indices(Variant::Join);
        lat
    }

    /// Dynamic-programming meet computation in the variant order, one row per
    /// element. Returns the table (if small enough) or the first failing pair.
    fn meet_rows(&self, v: Variant) -> std::result::Result<Option<Vec<u32>>, (usize, usize)> {
        let n = self.len();
        let keep = n <= TABLE_CAP;
        let mut table = if keep { vec![NONE; n * n] } else { Vec::new() };
        let order = self.ascending_v(v);
        let mut row = vec![NONE; n];
        for &a in &order {
            row.fill(NONE);
            for &b in &order {
                let m = if self.leq_v(v, a, b) {
                    a
                } else if self.leq_v(v, b, a) {
                    b
                } else {
                    let covers = self.lower_covers_v(v, b);
                    let best = covers
                        .iter()
                        .map(|&c| row[c] as usize)
                        .max_by_key(|&m| self.rank_v(v, m))
                        .ok_or((a, b))?;
                    if covers.iter().any(|&c| !self.leq_v(v, row[c] as usize, best)) {
                        return Err((a.min(b), a.max(b)));
                    }
                    best
                };
                row[b] = m as u32;
            }
            if keep {
                table[a * n..(a + 1) * n].copy_from_slice(&row);
            }
        }
        Ok(keep.then_some(table))
    }

    fn irreducible_indices(&self, side: Variant) -> Vec<usize> {
        let extreme = match side {
            Variant::Meet => self.maximum(),
            Variant::Join => self.minimum(),
        };
        (0..self.len())
            .filter(|&x| self.upper_covers_v(side, x).len() <= 1 && Some(x) != extreme)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn key(&self) -> LatticeKey {
        self.key
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        resolve(&self.index, id)
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    /// All cover pairs `(upper, lower)` in topological order of the upper element.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.lower
            .iter()
            .enumerate()
            .flat_map(|(u, ls)| ls.iter().map(move |&l| (u, l)))
            .collect()
    }

    pub fn covers_by_id(&self) -> Vec<(&str, &str)> {
        self.covers()
            .into_iter()
            .map(|(u, l)| (self.id(u), self.id(l)))
            .collect()
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.down[y].contains(x)
    }

    /// `{y : y <= x}`.
    pub fn down_set(&self, x: usize) -> &BitSet {
        &self.down[x]
    }

    /// `{y : x <= y}`.
    pub fn up_set(&self, x: usize) -> &BitSet {
        &self.up[x]
    }

    pub fn maximum(&self) -> Option<usize> {
        let mut tops = (0..self.len()).filter(|&x| self.upper[x].is_empty());
        match (tops.next(), tops.next()) {
            (Some(t), None) => Some(t),
            _ => None,
        }
    }

    pub fn minimum(&self) -> Option<usize> {
        let mut bottoms = (0..self.len()).filter(|&x| self.lower[x].is_empty());
        match (bottoms.next(), bottoms.next()) {
            (Some(b), None) => Some(b),
            _ => None,
        }
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.upper[x].is_empty()).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.lower[x].is_empty()).collect()
    }

    /// Number of comparable pairs `x <= y` (including `x == y`).
    pub fn comparable_pairs(&self) -> usize {
        self.down.iter().map(BitSet::count).sum()
    }

    pub fn check_meet_semilattice(&self) -> Verdict {
        if self.kind.meet {
            return Verdict::Ok;
        }
        match self.meet_rows(Variant::Meet) {
            Ok(_) => Verdict::Ok,
            Err((a, b)) => Verdict::Witness(a, b),
        }
    }

    pub fn check_join_semilattice(&self) -> Verdict {
        if self.kind.join {
            return Verdict::Ok;
        }
        match self.meet_rows(Variant::Join) {
            Ok(_) => Verdict::Ok,
            Err((a, b)) => Verdict::Witness(a, b),
        }
    }

    /// Greatest lower bound. Defined on meet-semilattices, and on
    /// join-semilattices whenever a common lower bound exists.
    pub fn meet(&self, a: usize, b: usize) -> Result<usize> {
        if self.kind.meet {
            return Ok(self.meet_fast(Variant::Meet, a, b));
        }
        if !self.kind.join {
            return Err(Error::StructureNotVerified(Structure::MeetSemilattice));
        }
        self.down[a]
            .last_common(&self.down[b])
            .ok_or_else(|| Error::MeetUndefined(self.ids[a].clone(), self.ids[b].clone()))
    }

    /// Least upper bound. On a meet-semilattice this is the meet of all common
    /// upper bounds, which exists whenever there is one.
    pub fn join(&self, a: usize, b: usize) -> Result<usize> {
        if self.kind.join {
            return Ok(self.meet_fast(Variant::Join, a, b));
        }
        if !self.kind.meet {
            return Err(Error::StructureNotVerified(Structure::JoinSemilattice));
        }
        self.up[a]
            .first_common(&self.up[b])
            .ok_or_else(|| Error::JoinUndefined(self.ids[a].clone(), self.ids[b].clone()))
    }

    pub fn meet_by_id(&self, a: &str, b: &str) -> Result<&str> {
        let m = self.meet(self.index_of(a)?, self.index_of(b)?)?;
        Ok(self.id(m))
    }

    pub fn join_by_id(&self, a: &str, b: &str) -> Result<&str> {
        let j = self.join(self.index_of(a)?, self.index_of(b)?)?;
        Ok(self.id(j))
    }

    /// Meet in the variant order; caller guarantees the variant's structure.
    #[inline]
    fn meet_fast(&self, v: Variant, a: usize, b: usize) -> usize {
        let n = self.len();
        let table = match v {
            Variant::Meet => &self.meet_table,
            Variant::Join => &self.join_table,
        };
        if let Some(t) = table {
            return t[a * n + b] as usize;
        }
        match v {
            Variant::Meet => self.down[a].last_common(&self.down[b]),
            Variant::Join => self.up[a].first_common(&self.up[b]),
        }
        .expect("semilattice operation always defined")
    }

    /// Adds a new maximum above all maximal elements unless one already exists.
    pub fn add_top(&self, id: &str) -> Result<Lattice> {
        if self.maximum().is_some() {
            return Ok(self.clone());
        }
        if self.index.contains_key(id) {
            return Err(Error::DuplicateElement(id.to_string()));
        }
        let mut elements: Vec<&str> = self.ids.iter().map(String::as_str).collect();
        elements.push(id);
        let mut covers = self.covers_by_id();
        covers.extend(self.maximal_elements().into_iter().map(|m| (id, self.id(m))));
        Lattice::from_covers(&elements, &covers)
    }

    /// Meet- or join-irreducible elements, excluding the unique maximum
    /// (meet side) or unique minimum (join side).
    pub fn irreducibles(&self, side: Variant) -> Result<ElementSet> {
        if !self.kind.meet && !self.kind.join {
            return Err(Error::StructureNotVerified(Structure::for_variant(side)));
        }
        Ok(ElementSet::from_indices(self, self.generators(side).iter().copied()))
    }

    /// Generating shifts of the variant in topological order.
    pub fn generators(&self, v: Variant) -> &[usize] {
        match v {
            Variant::Meet => &self.meet_irr,
            Variant::Join => &self.join_irr,
        }
    }

    /// Order-reversed poset. Elements are listed in reverse so that
    /// `dual(dual(L)) == L`.
    pub fn dual(&self) -> Lattice {
        let n = self.len();
        let flip = |i: usize| n - 1 - i;
        let flip_bits = |b: &BitSet| BitSet::from_indices(n, b.iter().map(flip));
        let flip_list = |ls: &Vec<usize>| {
            let mut v: Vec<usize> = ls.iter().map(|&i| flip(i)).collect();
            v.sort_unstable();
            v
        };
        let ids: Vec<String> = self.ids.iter().rev().cloned().collect();
        let lower: Vec<Vec<usize>> = self.upper.iter().rev().map(flip_list).collect();
        let upper: Vec<Vec<usize>> = self.lower.iter().rev().map(flip_list).collect();
        let down: Vec<BitSet> = self.up.iter().rev().map(flip_bits).collect();
        let up: Vec<BitSet> = self.down.iter().rev().map(flip_bits).collect();
        let flip_table = |t: &Option<Vec<u32>>| {
            t.as_ref().map(|t| {
                let mut out = vec![NONE; n * n];
                for a in 0..n {
                    for b in 0..n {
                        out[flip(a) * n + flip(b)] = flip(t[a * n + b] as usize) as u32;
                    }
                }
                out
            })
        };
        let rev_sorted = |v: &[usize]| {
            let mut out: Vec<usize> = v.iter().map(|&i| flip(i)).collect();
            out.sort_unstable();
            out
        };
        let key = fingerprint(&ids, &lower);
        Lattice {
            index: ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect(),
            ids,
            lower,
            upper,
            down,
            up,
            kind: Kind {
                meet: self.kind.join,
                join: self.kind.meet,
            },
            meet_table: flip_table(&self.join_table),
            join_table: flip_table(&self.meet_table),
            meet_irr: rev_sorted(&self.join_irr),
            join_irr: rev_sorted(&self.meet_irr),
            key,
        }
    }

    /// Subset encoding `x -> {g join-irreducible : g <= x}` (taken in the
    /// lattice completed by a top element), under which meets become
    /// bitwise intersections.
    pub fn embed_subsets(&self) -> Result<SubsetEmbedding> {
        self.embed_subsets_v(Variant::Meet)
    }

    pub(crate) fn embed_subsets_v(&self, v: Variant) -> Result<SubsetEmbedding> {
        self.require(v)?;
        // join-irreducibles of L + top: exactly one lower cover
        let generators: Vec<usize> = self
            .ascending_v(v)
            .into_iter()
            .filter(|&x| self.lower_covers_v(v, x).len() == 1)
            .collect();
        let k = generators.len();
        let codes = (0..self.len())
            .map(|x| {
                BitSet::from_indices(
                    k,
                    generators
                        .iter()
                        .enumerate()
                        .filter(|&(_, &g)| self.leq_v(v, g, x))
                        .map(|(i, _)| i),
                )
            })
            .collect();
        Ok(SubsetEmbedding { generators, codes })
    }

    /// Fails unless the structure driving `variant` has been verified.
    pub fn require(&self, v: Variant) -> Result<()> {
        if self.kind.has(v) {
            Ok(())
        } else {
            Err(Error::StructureNotVerified(Structure::for_variant(v)))
        }
    }

    // --- variant-order helpers: Meet uses <=, Join uses >= ---

    #[inline]
    pub fn leq_v(&self, v: Variant, x: usize, y: usize) -> bool {
        match v {
            Variant::Meet => self.down[y].contains(x),
            Variant::Join => self.up[y].contains(x),
        }
    }

    /// `{y : y <=_v x}`.
    #[inline]
    pub fn below_v(&self, v: Variant, x: usize) -> &BitSet {
        match v {
            Variant::Meet => &self.down[x],
            Variant::Join => &self.up[x],
        }
    }

    /// `{y : x <=_v y}`.
    #[inline]
    pub fn above_v(&self, v: Variant, x: usize) -> &BitSet {
        match v {
            Variant::Meet => &self.up[x],
            Variant::Join => &self.down[x],
        }
    }

    #[inline]
    pub fn lower_covers_v(&self, v: Variant, x: usize) -> &[usize] {
        match v {
            Variant::Meet => &self.lower[x],
            Variant::Join => &self.upper[x],
        }
    }

    #[inline]
    pub fn upper_covers_v(&self, v: Variant, x: usize) -> &[usize] {
        match v {
            Variant::Meet => &self.upper[x],
            Variant::Join => &self.lower[x],
        }
    }

    /// Position of `x` in the variant's topological order.
    #[inline]
    pub fn rank_v(&self, v: Variant, x: usize) -> usize {
        match v {
            Variant::Meet => x,
            Variant::Join => self.len() - 1 - x,
        }
    }

    /// Element indices in the variant's topological order.
    pub fn ascending_v(&self, v: Variant) -> Vec<usize> {
        match v {
            Variant::Meet => (0..self.len()).collect(),
            Variant::Join => (0..self.len()).rev().collect(),
        }
    }

    /// Meet in the variant order (join for [`Variant::Join`]).
    pub fn meet_v(&self, v: Variant, a: usize, b: usize) -> Result<usize> {
        self.require(v)?;
        Ok(self.meet_fast(v, a, b))
    }

    /// Unchecked variant meet for inner loops; `require(v)` must hold.
    #[inline]
    pub(crate) fn meet_v_unchecked(&self, v: Variant, a: usize, b: usize) -> usize {
        debug_assert!(self.kind.has(v));
        self.meet_fast(v, a, b)
    }

    /// Least element of the variant order (the constant Fourier basis vector).
    pub fn bottom_v(&self, v: Variant) -> Option<usize> {
        match v {
            Variant::Meet => self.minimum(),
            Variant::Join => self.maximum(),
        }
    }

    pub fn top_v(&self, v: Variant) -> Option<usize> {
        match v {
            Variant::Meet => self.maximum(),
            Variant::Join => self.minimum(),
        }
    }
}

fn relabel(ids: &[String], lower_in: &[Vec<usize>], order: &[usize]) -> (Vec<String>, Vec<Vec<usize>>) {
    let mut pos = vec![0; order.len()];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    let ids = order.iter().map(|&i| ids[i].clone()).collect();
    let lower = order
        .iter()
        .map(|&i| {
            let mut ls: Vec<usize> = lower_in[i].iter().map(|&l| pos[l]).collect();
            ls.sort_unstable();
            ls
        })
        .collect();
    (ids, lower)
}

/// Reflexive-transitive closure by OR-propagation in topological order.
fn closure(lower: &[Vec<usize>]) -> Vec<BitSet> {
    let n = lower.len();
    let mut down: Vec<BitSet> = Vec::with_capacity(n);
    for (x, ls) in lower.iter().enumerate() {
        let mut row = BitSet::new(n);
        row.insert(x);
        for &l in ls {
            row.union_with(&down[l]);
        }
        down.push(row);
    }
    down
}

pub(crate) fn fingerprint(ids: &[String], lower: &[Vec<usize>]) -> LatticeKey {
    let mut h = DefaultHasher::new();
    ids.len().hash(&mut h);
    for (id, ls) in ids.iter().zip(lower) {
        id.hash(&mut h);
        ls.hash(&mut h);
    }
    LatticeKey(h.finish())
}
