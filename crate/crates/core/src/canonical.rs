//! Canonical codes, minimal DAGs and automorphism counts.
//!
//! Fringe subtrees are classified bottom-up: each vertex gets the id of its
//! class by interning the sequence of its children's ids (with slots for
//! [`IsoNotion::AsFamily`], sorted for [`IsoNotion::Unordered`]). The number of
//! interned keys is the number of distinct fringe subtrees, i.e. the size of
//! the minimal DAG.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::numeric::ln_factorial;
use crate::tree::Tree;

/// When two fringe subtrees count as the same.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsoNotion {
    /// Child order and slot positions matter (identity within the family).
    #[serde(rename = "family")]
    AsFamily,
    /// Child order matters, slots do not.
    Plane,
    /// Neither order nor slots matter.
    Unordered,
}

impl IsoNotion {
    pub const ALL: [IsoNotion; 3] = [IsoNotion::AsFamily, IsoNotion::Plane, IsoNotion::Unordered];

    pub fn name(self) -> &'static str {
        match self {
            IsoNotion::AsFamily => "family",
            IsoNotion::Plane => "plane",
            IsoNotion::Unordered => "unordered",
        }
    }

    fn tag(self) -> u64 {
        match self {
            IsoNotion::AsFamily => 0x51,
            IsoNotion::Plane => 0x52,
            IsoNotion::Unordered => 0x53,
        }
    }
}

impl fmt::Display for IsoNotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IsoNotion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "family" | "asfamily" | "as-family" => Ok(IsoNotion::AsFamily),
            "plane" => Ok(IsoNotion::Plane),
            "unordered" => Ok(IsoNotion::Unordered),
            other => Err(format!("unknown isomorphism notion {other:?} (family|plane|unordered)")),
        }
    }
}

/// Canonical byte string of a tree under one notion.
///
/// The bytes are themselves a tree in the text grammar: slotted for
/// [`IsoNotion::AsFamily`] on slotted trees, plane otherwise, with children
/// sorted lexicographically for [`IsoNotion::Unordered`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode {
    pub bytes: Vec<u8>,
    pub notion: IsoNotion,
}

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.bytes).expect("codes are ASCII")
    }
}

fn effective_slots(t: &Tree, notion: IsoNotion) -> bool {
    notion == IsoNotion::AsFamily && t.is_slotted()
}

/// Per-vertex code strings, built bottom-up. Quadratic in the height of the
/// tree; intended for whole-tree codes and for the code-set oracle.
fn vertex_codes(t: &Tree, notion: IsoNotion) -> Vec<Vec<u8>> {
    let n = t.len();
    let slotted = effective_slots(t, notion);
    let mut codes: Vec<Vec<u8>> = vec![Vec::new(); n];
    for v in (0..n as u32).rev() {
        let kids = t.children(v);
        let mut out = Vec::new();
        if slotted {
            let slots = t.slots(v).unwrap();
            out.push(b'[');
            for (i, (&c, &s)) in kids.iter().zip(slots).enumerate() {
                if i > 0 {
                    out.push(b' ');
                }
                write!(SliceWriter(&mut out), "{s}:").unwrap();
                out.extend_from_slice(&codes[c as usize]);
            }
            out.push(b']');
        } else {
            let mut parts: Vec<&[u8]> = kids.iter().map(|&c| codes[c as usize].as_slice()).collect();
            if notion == IsoNotion::Unordered {
                parts.sort_unstable();
            }
            out.push(b'(');
            for p in parts {
                out.extend_from_slice(p);
            }
            out.push(b')');
        }
        codes[v as usize] = out;
    }
    codes
}

struct SliceWriter<'a>(&'a mut Vec<u8>);

impl std::fmt::Write for SliceWriter<'_> {
    fn write_str(&mut self, s: &str) -> fmt::Result {
        self.0.extend_from_slice(s.as_bytes());
        Ok(())
    }
}

pub fn canonical_code(t: &Tree, notion: IsoNotion) -> CanonicalCode {
    let mut codes = vertex_codes(t, notion);
    CanonicalCode {
        bytes: std::mem::take(&mut codes[0]),
        notion,
    }
}

/// Number of distinct canonical codes among all fringe subtrees, computed
/// from the code strings themselves. Independent of the interning path.
pub fn distinct_codes_oracle(t: &Tree, notion: IsoNotion) -> usize {
    vertex_codes(t, notion).into_iter().collect::<HashSet<_>>().len()
}

/// Interns child-id sequences into class ids.
#[derive(Debug, Default)]
pub struct Interner {
    map: HashMap<Box<[u32]>, u32>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, key: &[u32]) -> (u32, bool) {
        if let Some(&id) = self.map.get(key) {
            return (id, false);
        }
        let id = self.map.len() as u32;
        self.map.insert(key.into(), id);
        (id, true)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Class id of every fringe subtree under `notion`, plus the class count.
///
/// Ids are assigned in order of first appearance in reverse preorder, so a
/// class's children always have smaller ids.
pub fn class_ids(t: &Tree, notion: IsoNotion) -> (Vec<u32>, usize) {
    let n = t.len();
    let slotted = effective_slots(t, notion);
    let mut interner = Interner::new();
    let mut ids = vec![0u32; n];
    let mut key: Vec<u32> = Vec::new();
    for v in (0..n as u32).rev() {
        key.clear();
        let kids = t.children(v);
        if slotted {
            for (&c, &s) in kids.iter().zip(t.slots(v).unwrap()) {
                key.push(s);
                key.push(ids[c as usize]);
            }
        } else {
            key.extend(kids.iter().map(|&c| ids[c as usize]));
            if notion == IsoNotion::Unordered {
                key.sort_unstable();
            }
        }
        ids[v as usize] = interner.intern(&key).0;
    }
    (ids, interner.len())
}

pub fn count_distinct_fringe(t: &Tree, notion: IsoNotion) -> usize {
    class_ids(t, notion).1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagNode {
    pub code_hash: u64,
    /// `(slot, child node)`; the slot is `None` unless the DAG is slotted.
    pub children: Vec<(Option<u32>, u32)>,
    /// Number of fringe subtrees of the source tree in this class.
    pub multiplicity: u64,
    pub size: u64,
}

/// Hash-consed shared-subtree graph of a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalDag {
    pub notion: IsoNotion,
    /// Whether node codes carry slots (family notion on a slotted tree).
    pub slotted: bool,
    pub nodes: Vec<DagNode>,
    pub root: u32,
}

fn mix(mut h: u64, x: u64) -> u64 {
    // splitmix64 finaliser over a running state
    h ^= x.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}

pub fn build_minimal_dag(t: &Tree, notion: IsoNotion) -> MinimalDag {
    let n = t.len();
    let slotted = effective_slots(t, notion);
    let mut interner = Interner::new();
    let mut ids = vec![0u32; n];
    let mut nodes: Vec<DagNode> = Vec::new();
    let mut key: Vec<u32> = Vec::new();
    for v in (0..n as u32).rev() {
        key.clear();
        let kids = t.children(v);
        if slotted {
            for (&c, &s) in kids.iter().zip(t.slots(v).unwrap()) {
                key.push(s);
                key.push(ids[c as usize]);
            }
        } else {
            key.extend(kids.iter().map(|&c| ids[c as usize]));
            if notion == IsoNotion::Unordered {
                key.sort_unstable();
            }
        }
        let (id, fresh) = interner.intern(&key);
        ids[v as usize] = id;
        if fresh {
            let children: Vec<(Option<u32>, u32)> = if slotted {
                key.chunks(2).map(|p| (Some(p[0]), p[1])).collect()
            } else {
                key.iter().map(|&c| (None, c)).collect()
            };
            let mut child_hashes: Vec<(u64, u64)> = children
                .iter()
                .map(|&(s, c)| (s.map_or(u64::MAX, u64::from), nodes[c as usize].code_hash))
                .collect();
            if notion == IsoNotion::Unordered {
                child_hashes.sort_unstable();
            }
            let mut h = mix(notion.tag(), children.len() as u64);
            for (s, ch) in child_hashes {
                h = mix(mix(h, s), ch);
            }
            let size = 1 + children.iter().map(|&(_, c)| nodes[c as usize].size).sum::<u64>();
            nodes.push(DagNode {
                code_hash: h,
                children,
                multiplicity: 0,
                size,
            });
        }
        nodes[id as usize].multiplicity += 1;
    }
    MinimalDag {
        notion,
        slotted,
        nodes,
        root: ids[0],
    }
}

impl MinimalDag {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Canonical code of the tree obtained by unfolding the DAG from its root.
    pub fn unfold_code(&self) -> CanonicalCode {
        let mut codes: Vec<Vec<u8>> = Vec::with_capacity(self.nodes.len());
        for nd in &self.nodes {
            let mut out = Vec::new();
            if self.slotted {
                out.push(b'[');
                for (i, &(s, c)) in nd.children.iter().enumerate() {
                    if i > 0 {
                        out.push(b' ');
                    }
                    write!(SliceWriter(&mut out), "{}:", s.unwrap()).unwrap();
                    out.extend_from_slice(&codes[c as usize]);
                }
                out.push(b']');
            } else {
                let mut parts: Vec<&[u8]> = nd.children.iter().map(|&(_, c)| codes[c as usize].as_slice()).collect();
                if self.notion == IsoNotion::Unordered {
                    parts.sort_unstable();
                }
                out.push(b'(');
                for p in parts {
                    out.extend_from_slice(p);
                }
                out.push(b')');
            }
            codes.push(out);
        }
        CanonicalCode {
            bytes: std::mem::take(&mut codes[self.root as usize]),
            notion: self.notion,
        }
    }

    /// Text export: a header line, then one line per node
    /// `id code_hash multiplicity [slot:child_id ...]`.
    ///
    /// Slot-free DAGs use the child position as the slot.
    pub fn export(&self) -> String {
        let mut out = String::new();
        writeln!(out, "root {} nodes {} notion {}", self.root, self.nodes.len(), self.notion).unwrap();
        for (id, nd) in self.nodes.iter().enumerate() {
            write!(out, "{id} {:016x} {}", nd.code_hash, nd.multiplicity).unwrap();
            for (i, &(s, c)) in nd.children.iter().enumerate() {
                write!(out, " {}:{c}", s.unwrap_or(i as u32)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Distinct-class counts under every notion, in [`IsoNotion::ALL`] order.
pub fn distinct_counts_all(t: &Tree) -> [usize; 3] {
    let family = count_distinct_fringe(t, IsoNotion::AsFamily);
    let plane = if t.is_slotted() {
        count_distinct_fringe(t, IsoNotion::Plane)
    } else {
        family
    };
    [family, plane, count_distinct_fringe(t, IsoNotion::Unordered)]
}

/// Multiplicities `m_i` of isomorphic (unordered) branches at every vertex,
/// given the unordered class ids.
pub fn branch_multiplicities<'a>(t: &'a Tree, unordered_ids: &'a [u32], v: u32, buf: &mut Vec<u32>) -> Vec<u64> {
    buf.clear();
    buf.extend(t.children(v).iter().map(|&c| unordered_ids[c as usize]));
    buf.sort_unstable();
    let mut out = Vec::new();
    let mut i = 0;
    while i < buf.len() {
        let mut j = i;
        while j < buf.len() && buf[j] == buf[i] {
            j += 1;
        }
        out.push((j - i) as u64);
        i = j;
    }
    out
}

/// `ln |Aut(t)|` of every fringe subtree, treating the tree as unordered.
pub fn automorphism_logs(t: &Tree) -> Vec<f64> {
    let (ids, _) = class_ids(t, IsoNotion::Unordered);
    let n = t.len();
    let mut logs = vec![0.0f64; n];
    let mut buf = Vec::new();
    for v in (0..n as u32).rev() {
        let mut acc: f64 = t.children(v).iter().map(|&c| logs[c as usize]).sum();
        for m in branch_multiplicities(t, &ids, v, &mut buf) {
            acc += ln_factorial(m);
        }
        logs[v as usize] = acc;
    }
    logs
}

/// `ln |Aut(t)|`, with `t` treated as unordered.
pub fn automorphism_size_log(t: &Tree) -> f64 {
    automorphism_logs(t)[0]
}

/// Exact `|Aut(t)|`.
pub fn automorphism_size_exact(t: &Tree) -> BigUint {
    let (ids, _) = class_ids(t, IsoNotion::Unordered);
    let n = t.len();
    let mut aut: Vec<BigUint> = vec![BigUint::from(1u32); n];
    let mut buf = Vec::new();
    for v in (0..n as u32).rev() {
        let mut acc = BigUint::from(1u32);
        for &c in t.children(v) {
            acc *= &aut[c as usize];
        }
        for m in branch_multiplicities(t, &ids, v, &mut buf) {
            for k in 2..=m {
                acc *= BigUint::from(k);
            }
        }
        aut[v as usize] = acc;
    }
    aut.swap_remove(0)
}

/// `ln(Π_v deg(v)! / |Aut(t)|)`: the log of the number of distinct plane
/// trees sharing the unordered shape of `t`.
pub fn plane_embeddings_log(t: &Tree) -> f64 {
    let deg_part: f64 = (0..t.len() as u32).map(|v| ln_factorial(t.degree(v) as u64)).sum();
    deg_part - automorphism_size_log(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::TreeKind;

    const FIG2: &str = "[0:[0:[1:[]] 1:[]] 1:[0:[] 1:[0:[]]]]";

    fn slotted(s: &str) -> Tree {
        Tree::parse(s, TreeKind::Slotted(2)).unwrap()
    }

    fn plane(s: &str) -> Tree {
        Tree::parse(s, TreeKind::Plane).unwrap()
    }

    #[test]
    fn slot_positions_distinguish_only_as_family() {
        let a = slotted("[0:[]]");
        let b = slotted("[1:[]]");
        assert_ne!(canonical_code(&a, IsoNotion::AsFamily), canonical_code(&b, IsoNotion::AsFamily));
        assert_eq!(canonical_code(&a, IsoNotion::Plane), canonical_code(&b, IsoNotion::Plane));
    }

    #[test]
    fn mirror_images_are_unordered_equal() {
        let a = plane("((())())");
        let b = plane("(()(()))");
        assert_ne!(canonical_code(&a, IsoNotion::Plane), canonical_code(&b, IsoNotion::Plane));
        assert_eq!(canonical_code(&a, IsoNotion::Unordered), canonical_code(&b, IsoNotion::Unordered));
    }

    #[test]
    fn as_family_on_plane_tree_is_plane() {
        let t = plane("((())()(()()))");
        assert_eq!(canonical_code(&t, IsoNotion::AsFamily).bytes, canonical_code(&t, IsoNotion::Plane).bytes);
        assert_eq!(count_distinct_fringe(&t, IsoNotion::AsFamily), count_distinct_fringe(&t, IsoNotion::Plane));
    }

    #[test]
    fn figure_two_counts() {
        let t = slotted(FIG2);
        assert_eq!(t.len(), 9);
        assert_eq!(build_minimal_dag(&t, IsoNotion::AsFamily).node_count(), 6);
        assert_eq!(build_minimal_dag(&t, IsoNotion::Plane).node_count(), 5);
        assert_eq!(build_minimal_dag(&t, IsoNotion::Unordered).node_count(), 4);
        assert_eq!(distinct_counts_all(&t), [6, 5, 4]);
    }

    #[test]
    fn complete_binary_and_paths() {
        let t = Tree::complete_binary(3);
        for notion in IsoNotion::ALL {
            assert_eq!(build_minimal_dag(&t, notion).node_count(), 3);
        }
        for n in 1..20 {
            let p = Tree::path(n);
            for notion in IsoNotion::ALL {
                assert_eq!(count_distinct_fringe(&p, notion), n);
            }
        }
        assert_eq!(count_distinct_fringe(&Tree::singleton(), IsoNotion::Unordered), 1);
    }

    #[test]
    fn dag_multiplicities_and_unfolding() {
        let t = slotted(FIG2);
        for notion in IsoNotion::ALL {
            let dag = build_minimal_dag(&t, notion);
            let total: u64 = dag.nodes.iter().map(|n| n.multiplicity).sum();
            assert_eq!(total, 9);
            assert_eq!(dag.nodes[dag.root as usize].size, 9);
            assert_eq!(dag.unfold_code(), canonical_code(&t, notion));
        }
    }

    #[test]
    fn hashes_of_unordered_dag_are_canonical() {
        let a = build_minimal_dag(&plane("((())())"), IsoNotion::Unordered);
        let b = build_minimal_dag(&plane("(()(()))"), IsoNotion::Unordered);
        assert_eq!(a.nodes[a.root as usize].code_hash, b.nodes[b.root as usize].code_hash);
    }

    #[test]
    fn export_format() {
        let dag = build_minimal_dag(&slotted("[0:[] 1:[]]"), IsoNotion::AsFamily);
        let text = dag.export();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "root 1 nodes 2 notion family");
        assert!(lines[1].starts_with("0 ") && lines[1].ends_with(" 2"));
        assert!(lines[2].ends_with(" 1 0:0 1:0"));
    }

    #[test]
    fn automorphisms_small() {
        assert_eq!(automorphism_size_log(&Tree::singleton()), 0.0);
        assert!((automorphism_size_log(&Tree::star(3)) - 2f64.ln()).abs() < 1e-15);
        // root with branches {leaf, cherry}
        let t = plane("(()(()()))");
        assert!((automorphism_size_log(&t) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(automorphism_size_exact(&t), BigUint::from(2u32));
        assert!(plane_embeddings_log(&Tree::star(3)).abs() < 1e-15);
        assert!((plane_embeddings_log(&t) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn exact_and_log_automorphisms_agree() {
        // star of 8 leaves under a root, twice, plus a path: |Aut| = (7!)^2 * 2
        let t = plane("((()()()()()()())(()()()()()()())((())))");
        let exact = automorphism_size_exact(&t);
        assert_eq!(exact, BigUint::from(5040u32 * 5040 * 2));
        let rel = (automorphism_size_log(&t) - crate::scalar::ln_biguint(&exact)).abs() / crate::scalar::ln_biguint(&exact);
        assert!(rel < 1e-12);
    }

    #[test]
    fn notion_parsing() {
        assert_eq!("family".parse::<IsoNotion>().unwrap(), IsoNotion::AsFamily);
        assert_eq!("Unordered".parse::<IsoNotion>().unwrap(), IsoNotion::Unordered);
        assert!("other".parse::<IsoNotion>().is_err());
    }
}
