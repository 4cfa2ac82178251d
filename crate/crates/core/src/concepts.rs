//! Formal concept analysis: derivation operators, Close-by-One enumeration
//! and concept lattices ordered by intent inclusion.

use std::collections::{HashMap, HashSet};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, TABLE_CAP};
use crate::signal::Signal;

/// Binary object-attribute relation, stored by rows and by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    objects: Vec<String>,
    attributes: Vec<String>,
    rows: Vec<BitSet>,
    cols: Vec<BitSet>,
}

fn check_unique(names: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::DuplicateElement(n.clone()));
        }
    }
    Ok(())
}

impl Context {
    pub fn new(objects: Vec<String>, attributes: Vec<String>, incidence: &[Vec<bool>]) -> Result<Context> {
        if incidence.len() != objects.len() {
            return Err(Error::DimensionMismatch {
                expected: objects.len(),
                actual: incidence.len(),
            });
        }
        let m = attributes.len();
        let mut rows = Vec::with_capacity(objects.len());
        for row in incidence {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    actual: row.len(),
                });
            }
            rows.push(BitSet::from_indices(m, (0..m).filter(|&a| row[a])));
        }
        Self::from_rows(objects, attributes, rows)
    }

    pub fn from_rows(objects: Vec<String>, attributes: Vec<String>, rows: Vec<BitSet>) -> Result<Context> {
        check_unique(&objects)?;
        check_unique(&attributes)?;
        let g = objects.len();
        let cols = (0..attributes.len())
            .map(|a| BitSet::from_indices(g, (0..g).filter(|&o| rows[o].contains(a))))
            .collect();
        Ok(Context {
            objects,
            attributes,
            rows,
            cols,
        })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn has(&self, object: usize, attribute: usize) -> bool {
        self.rows[object].contains(attribute)
    }

    /// Attributes of one object.
    pub fn row(&self, object: usize) -> &BitSet {
        &self.rows[object]
    }

    /// Objects having one attribute.
    pub fn column(&self, attribute: usize) -> &BitSet {
        &self.cols[attribute]
    }

    pub fn object_set(&self, indices: impl IntoIterator<Item = usize>) -> BitSet {
        BitSet::from_indices(self.objects.len(), indices)
    }

    pub fn attribute_set(&self, indices: impl IntoIterator<Item = usize>) -> BitSet {
        BitSet::from_indices(self.attributes.len(), indices)
    }

    /// Attributes shared by all objects in `objects`.
    pub fn derive_attr(&self, objects: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.attributes.len());
        for o in objects.iter() {
            out.intersect_with(&self.rows[o]);
        }
        out
    }

    /// Objects having all attributes in `attributes`.
    pub fn derive_obj(&self, attributes: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.objects.len());
        for a in attributes.iter() {
            out.intersect_with(&self.cols[a]);
        }
        out
    }

    pub fn transpose(&self) -> Context {
        Context {
            objects: self.attributes.clone(),
            attributes: self.objects.clone(),
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    /// Merges objects with identical rows. Returns the clarified context
    /// (objects named after their group members joined by `+`) and the
    /// original object indices of each group.
    pub fn clarify(&self) -> (Context, Vec<Vec<usize>>) {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut seen: HashMap<&BitSet, usize> = HashMap::new();
        for (o, row) in self.rows.iter().enumerate() {
            match seen.get(row) {
                Some(&g) => groups[g].push(o),
                None => {
                    seen.insert(row, groups.len());
                    groups.push(vec![o]);
                }
            }
        }
        let names = groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|&o| self.objects[o].as_str())
                    .collect::<Vec<_>>()
                    .join("+")
            })
            .collect();
        let rows = groups.iter().map(|g| self.rows[g[0]].clone()).collect();
        let ctx = Context::from_rows(names, self.attributes.clone(), rows).expect("group names are unique");
        (ctx, groups)
    }
}

/// A pair `(extent, intent)` with `attr(extent) = intent`, `obj(intent) = extent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Concept {
    pub extent: BitSet,
    pub intent: BitSet,
}

fn intent_key(intent: &BitSet) -> Vec<bool> {
    (0..intent.len()).map(|a| intent.contains(a)).collect()
}

/// All formal concepts, ordered lexicographically by intent bit-vector.
pub fn enumerate_concepts(ctx: &Context) -> Vec<Concept> {
    let all = BitSet::full(ctx.objects.len());
    let intent = ctx.derive_attr(&all);
    let mut out = Vec::new();
    close_by_one(ctx, all, intent, 0, &mut out);
    out.sort_by_cached_key(|c| intent_key(&c.intent));
    out
}

fn close_by_one(ctx: &Context, extent: BitSet, intent: BitSet, from: usize, out: &mut Vec<Concept>) {
    let m = ctx.attributes.len();
    for j in from..m {
        if intent.contains(j) {
            continue;
        }
        let mut child_extent = extent.clone();
        child_extent.intersect_with(&ctx.cols[j]);
        let child_intent = ctx.derive_attr(&child_extent);
        // canonical iff no attribute before j was added by the closure
        let canonical = (0..j).all(|a| child_intent.contains(a) == intent.contains(a));
        if canonical {
            close_by_one(ctx, child_extent, child_intent, j + 1, out);
        }
    }
    out.push(Concept { extent, intent });
}

/// Concepts as a lattice ordered by intent inclusion.
#[derive(Clone, Debug)]
pub struct ConceptLattice {
    lattice: Lattice,
    concepts: Vec<Concept>,
    objects: Vec<String>,
    attributes: Vec<String>,
}

/// Element id of a concept: `{a1,a2,...}` listing its intent.
pub fn concept_id(ctx_attributes: &[String], intent: &BitSet) -> String {
    let names: Vec<String> = intent
        .iter()
        .map(|a| ctx_attributes[a].split_whitespace().collect::<Vec<_>>().join("_"))
        .collect();
    format!("{{{}}}", names.join(","))
}

pub fn build_concept_lattice(ctx: &Context) -> ConceptLattice {
    let mut concepts = enumerate_concepts(ctx);
    // graded by intent size is a topological order for inclusion
    concepts.sort_by_cached_key(|c| (c.intent.count(), intent_key(&c.intent)));
    let n = concepts.len();
    let m = ctx.attributes.len();
    // with_attr[a] = concepts whose intent contains a
    let with_attr: Vec<BitSet> = (0..m)
        .map(|a| BitSet::from_indices(n, (0..n).filter(|&c| concepts[c].intent.contains(a))))
        .collect();
    let down: Vec<BitSet> = concepts
        .iter()
        .map(|c| {
            let mut below = BitSet::full(n);
            for a in (0..m).filter(|&a| !c.intent.contains(a)) {
                below.difference_with(&with_attr[a]);
            }
            below
        })
        .collect();
    let ids = concepts
        .iter()
        .map(|c| concept_id(&ctx.attributes, &c.intent))
        .collect();
    let lattice = Lattice::from_down_sets(ids, down, n > TABLE_CAP);
    ConceptLattice {
        lattice,
        concepts,
        objects: ctx.objects.clone(),
        attributes: ctx.attributes.clone(),
    }
}

impl ConceptLattice {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Concept at each lattice element, in lattice order.
    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn concept(&self, i: usize) -> &Concept {
        &self.concepts[i]
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn find_by_intent(&self, intent: &BitSet) -> Option<usize> {
        self.concepts.iter().position(|c| &c.intent == intent)
    }

    /// Lattice element whose intent has exactly these attribute names.
    pub fn find_by_attribute_names<S: AsRef<str>>(&self, names: &[S]) -> Option<usize> {
        let idx: Option<Vec<usize>> = names
            .iter()
            .map(|n| self.attributes.iter().position(|a| a == n.as_ref()))
            .collect();
        self.find_by_intent(&BitSet::from_indices(self.attributes.len(), idx?))
    }

    /// `extent: {..}; intent: {..}` for annotations.
    pub fn describe(&self, i: usize) -> String {
        let c = &self.concepts[i];
        let ext: Vec<&str> = c.extent.iter().map(|o| self.objects[o].as_str()).collect();
        let int: Vec<&str> = c.intent.iter().map(|a| self.attributes[a].as_str()).collect();
        format!("extent {{{}}} intent {{{}}}", ext.join(","), int.join(","))
    }
}

/// Signal attached to a concept lattice, with the concepts whose extent is
/// empty (their value is set to 0).
#[derive(Clone, Debug)]
pub struct AttachedSignal {
    pub signal: Signal,
    pub empty_extents: Vec<usize>,
}

/// Mean of the object labels over each concept's extent.
pub fn attach_signal<S: AsRef<str>>(cl: &ConceptLattice, labels: &[(S, f64)]) -> Result<AttachedSignal> {
    let by_name: HashMap<&str, f64> = labels.iter().map(|(k, v)| (k.as_ref(), *v)).collect();
    let values = cl
        .objects
        .iter()
        .map(|o| {
            by_name
                .get(o.as_str())
                .copied()
                .ok_or_else(|| Error::MissingLabel(o.clone()))
        })
        .collect::<Result<Vec<f64>>>()?;
    attach_signal_weighted(cl, &values, &vec![1.0; values.len()])
}

/// Weighted mean `Σ w_o v_o / Σ w_o` over each extent; `values` and
/// `weights` follow the context's object order.
pub fn attach_signal_weighted(cl: &ConceptLattice, values: &[f64], weights: &[f64]) -> Result<AttachedSignal> {
    for v in [values.len(), weights.len()] {
        if v != cl.objects.len() {
            return Err(Error::DimensionMismatch {
                expected: cl.objects.len(),
                actual: v,
            });
        }
    }
    let mut empty_extents = Vec::new();
    let out = cl
        .concepts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let w: f64 = c.extent.iter().map(|o| weights[o]).sum();
            if c.extent.is_empty() || w == 0.0 {
                empty_extents.push(i);
                return 0.0;
            }
            c.extent.iter().map(|o| weights[o] * values[o]).sum::<f64>() / w
        })
        .collect();
    Ok(AttachedSignal {
        signal: Signal::new(&cl.lattice, out)?,
        empty_extents,
    })
}

/// Context recovered as the union of all extent × intent rectangles.
pub fn reconstruct_context(cl: &ConceptLattice) -> Context {
    let m = cl.attributes.len();
    let mut rows = vec![BitSet::new(m); cl.objects.len()];
    for c in &cl.concepts {
        for o in c.extent.iter() {
            rows[o].union_with(&c.intent);
        }
    }
    Context::from_rows(cl.objects.clone(), cl.attributes.clone(), rows).expect("names were validated")
}
