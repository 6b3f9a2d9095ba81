//! Rooted ordered trees stored as a flat preorder arena.
//!
//! Vertex ids are preorder ranks, so the root is `0`, every parent has a
//! smaller id than its children and iterating ids in reverse visits children
//! before parents. All traversals below rely on that and never recurse.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

const NO_PARENT: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("empty input")]
    Empty,
    #[error("unbalanced delimiters at byte {0}")]
    Unbalanced(usize),
    #[error("unexpected character {ch:?} at byte {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("trailing input at byte {0}")]
    Trailing(usize),
    #[error("slot {slot} at byte {pos} is not below the arity bound {arity}")]
    SlotOutOfRange { slot: u32, arity: u32, pos: usize },
    #[error("slots must be strictly increasing (byte {0})")]
    SlotsNotIncreasing(usize),
    #[error("invalid degree sequence: {0}")]
    InvalidDegrees(String),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("invalid labelling: {0}")]
    InvalidLabels(String),
}

/// How a textual tree is to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeKind {
    /// `( tree* )`
    Plane,
    /// `[ slot:tree* ]` with slots below the given arity.
    Slotted(u32),
}

/// A rooted tree with ordered children and optional child slots.
#[derive(Clone, PartialEq, Eq)]
pub struct Tree {
    parent: Vec<u32>,
    offsets: Vec<u32>,
    children: Vec<u32>,
    // slot of each child edge, parallel to `children`
    slots: Option<Vec<u32>>,
    arity: Option<u32>,
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({})", self.serialize())
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl Tree {
    pub fn singleton() -> Tree {
        Tree {
            parent: vec![NO_PARENT],
            offsets: vec![0, 0],
            children: Vec::new(),
            slots: None,
            arity: None,
        }
    }

    /// Builds a tree from a preorder parent array (`parent[0]` is ignored).
    ///
    /// `slots`, when given, holds for every vertex the slot it occupies in its
    /// parent (ignored for the root) together with the arity bound.
    pub fn from_preorder_parents(
        parent: Vec<u32>,
        slots: Option<(Vec<u32>, u32)>,
    ) -> Result<Tree, TreeError> {
        let n = parent.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if n >= NO_PARENT as usize {
            return Err(TreeError::NotATree("too many vertices".into()));
        }
        let mut parent = parent;
        parent[0] = NO_PARENT;
        let mut offsets = vec![0u32; n + 1];
        for (v, &p) in parent.iter().enumerate().skip(1) {
            if p as usize >= v {
                return Err(TreeError::NotATree(format!(
                    "vertex {v} has parent {p}, which is not an earlier preorder vertex"
                )));
            }
            offsets[p as usize + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut children = vec![0u32; n - 1];
        for (v, &p) in parent.iter().enumerate().skip(1) {
            let at = &mut fill[p as usize];
            children[*at as usize] = v as u32;
            *at += 1;
        }
        // preorder: the subtree of v is the contiguous id range [v, v + size)
        let mut size = vec![1u32; n];
        for v in (1..n).rev() {
            size[parent[v] as usize] += size[v];
        }
        for v in 0..n {
            let mut next = v as u32 + 1;
            for &c in &children[offsets[v] as usize..offsets[v + 1] as usize] {
                if c != next {
                    return Err(TreeError::NotATree(format!(
                        "vertex ids are not in preorder at vertex {c}"
                    )));
                }
                next += size[c as usize];
            }
        }
        let (slots, arity) = match slots {
            None => (None, None),
            Some((per_vertex, arity)) => {
                if per_vertex.len() != n {
                    return Err(TreeError::NotATree("slot array length mismatch".into()));
                }
                let edge_slots: Vec<u32> =
                    children.iter().map(|&c| per_vertex[c as usize]).collect();
                for v in 0..n {
                    let s = &edge_slots[offsets[v] as usize..offsets[v + 1] as usize];
                    if s.iter().any(|&x| x >= arity) {
                        return Err(TreeError::SlotOutOfRange {
                            slot: *s.iter().max().unwrap(),
                            arity,
                            pos: 0,
                        });
                    }
                    if s.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(TreeError::SlotsNotIncreasing(0));
                    }
                }
                (Some(edge_slots), Some(arity))
            }
        };
        Ok(Tree {
            parent,
            offsets,
            children,
            slots,
            arity,
        })
    }

    /// Builds a plane tree from its preorder out-degree sequence.
    pub fn from_preorder_degrees(degrees: &[u32]) -> Result<Tree, TreeError> {
        let parent = lukasiewicz_parents(degrees)?;
        Tree::from_preorder_parents(parent, None)
    }

    /// Builds a tree from arbitrary vertex ids and ordered child lists,
    /// renumbering vertices into preorder.
    ///
    /// Returns the tree and, for every input id, its preorder id.
    pub fn from_child_lists(
        root: usize,
        lists: &[Vec<u32>],
        slots: Option<(&[Vec<u32>], u32)>,
    ) -> Result<(Tree, Vec<u32>), TreeError> {
        let n = lists.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut new_id = vec![NO_PARENT; n];
        let mut parent = Vec::with_capacity(n);
        let mut slot_of = slots.map(|_| Vec::with_capacity(n));
        let mut stack: Vec<(usize, u32, u32)> = vec![(root, NO_PARENT, 0)];
        while let Some((v, p, s)) = stack.pop() {
            if v >= n || new_id[v] != NO_PARENT {
                return Err(TreeError::NotATree(format!("vertex {v} reached twice or out of range")));
            }
            new_id[v] = parent.len() as u32;
            parent.push(p);
            if let Some(so) = slot_of.as_mut() {
                so.push(s);
            }
            let me = new_id[v];
            let kids = &lists[v];
            for (i, &c) in kids.iter().enumerate().rev() {
                let slot = slots.map(|(sl, _)| sl[v][i]).unwrap_or(0);
                stack.push((c as usize, me, slot));
            }
        }
        if parent.len() != n {
            return Err(TreeError::NotATree("not all vertices are reachable from the root".into()));
        }
        let tree = Tree::from_preorder_parents(parent, slot_of.map(|so| (so, slots.unwrap().1)))?;
        Ok((tree, new_id))
    }

    /// Reads one tree in the text grammar. Whitespace is ignored.
    pub fn parse(text: &str, kind: TreeKind) -> Result<Tree, TreeError> {
        parse_tree(text, kind)
    }

    /// Reads a tree, inferring the kind from the first delimiter. Slotted
    /// trees get `arity` if given, otherwise one more than the largest slot
    /// (at least 2).
    pub fn parse_auto(text: &str, arity: Option<u32>) -> Result<Tree, TreeError> {
        let first = text.trim_start().chars().next().ok_or(TreeError::Empty)?;
        match first {
            '(' => parse_tree(text, TreeKind::Plane),
            '[' => {
                let d = match arity {
                    Some(d) => d,
                    None => {
                        let t = parse_tree(text, TreeKind::Slotted(u32::MAX))?;
                        t.slots.as_ref().and_then(|s| s.iter().max().copied()).map_or(2, |m| (m + 1).max(2))
                    }
                };
                parse_tree(text, TreeKind::Slotted(d))
            }
            ch => Err(TreeError::UnexpectedChar { ch, pos: 0 }),
        }
    }

    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(2 * self.len() + 8);
        let slotted = self.slots.is_some();
        let (open, close) = if slotted { ('[', ']') } else { ('(', ')') };
        // (vertex, index of next child)
        let mut stack: Vec<(u32, u32)> = vec![(0, 0)];
        out.push(open);
        while let Some(top) = stack.last_mut() {
            let (v, i) = *top;
            let kids = self.children(v);
            if (i as usize) < kids.len() {
                top.1 += 1;
                let c = kids[i as usize];
                if let Some(sl) = self.slots(v) {
                    if i > 0 {
                        out.push(' ');
                    }
                    out.push_str(&sl[i as usize].to_string());
                    out.push(':');
                }
                out.push(open);
                stack.push((c, 0));
            } else {
                out.push(close);
                stack.pop();
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> u32 {
        0
    }

    pub fn arity_bound(&self) -> Option<u32> {
        self.arity
    }

    pub fn is_slotted(&self) -> bool {
        self.slots.is_some()
    }

    pub fn children(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.children[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn slots(&self, v: u32) -> Option<&[u32]> {
        let v = v as usize;
        self.slots
            .as_ref()
            .map(|s| &s[self.offsets[v] as usize..self.offsets[v + 1] as usize])
    }

    pub fn degree(&self, v: u32) -> u32 {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn parent(&self, v: u32) -> Option<u32> {
        let p = self.parent[v as usize];
        (p != NO_PARENT).then_some(p)
    }

    /// Out-degrees in preorder (the Łukasiewicz word of the tree).
    pub fn preorder_degrees(&self) -> Vec<u32> {
        (0..self.len() as u32).map(|v| self.degree(v)).collect()
    }

    /// The same shape with slot labels dropped.
    pub fn without_slots(&self) -> Tree {
        Tree {
            slots: None,
            arity: None,
            ..self.clone()
        }
    }

    /// The fringe subtree rooted at `v`, as a standalone tree.
    pub fn fringe_subtree(&self, v: u32) -> Tree {
        let sizes = self.fringe_sizes();
        let start = v as usize;
        let end = start + sizes[start] as usize;
        let parent: Vec<u32> = (start..end)
            .map(|u| {
                if u == start {
                    NO_PARENT
                } else {
                    self.parent[u] - v
                }
            })
            .collect();
        let slots = self.slots.as_ref().map(|_| {
            let per_vertex: Vec<u32> = (start..end)
                .map(|u| if u == start { 0 } else { self.slot_in_parent(u as u32) })
                .collect();
            (per_vertex, self.arity.unwrap())
        });
        Tree::from_preorder_parents(parent, slots).expect("fringe subtree of a valid tree")
    }

    fn slot_in_parent(&self, v: u32) -> u32 {
        let p = self.parent[v as usize];
        let kids = self.children(p);
        let i = kids.iter().position(|&c| c == v).unwrap();
        self.slots(p).unwrap()[i]
    }

    /// `|t(v)|` for every vertex, indexed by vertex id.
    pub fn fringe_sizes(&self) -> Vec<u64> {
        let n = self.len();
        let mut size = vec![1u64; n];
        for v in (1..n).rev() {
            let p = self.parent[v] as usize;
            size[p] += size[v];
        }
        size
    }

    /// `k ↦ Z_k(t)`, the number of fringe subtrees of size `k`.
    pub fn subtree_count_by_size(&self) -> BTreeMap<u64, u64> {
        let mut out = BTreeMap::new();
        for s in self.fringe_sizes() {
            *out.entry(s).or_insert(0) += 1;
        }
        out
    }

    /// `k ↦ d_k(t)`, the number of vertices with out-degree `k`.
    pub fn degree_profile(&self) -> BTreeMap<u32, u64> {
        let mut out = BTreeMap::new();
        for v in 0..self.len() as u32 {
            *out.entry(self.degree(v)).or_insert(0) += 1;
        }
        out
    }

    /// Root-to-leaf path with `n` vertices.
    pub fn path(n: usize) -> Tree {
        assert!(n >= 1);
        let parent = (0..n as u32).map(|v| v.wrapping_sub(1)).collect();
        Tree::from_preorder_parents(parent, None).unwrap()
    }

    /// Root with `n - 1` leaf children.
    pub fn star(n: usize) -> Tree {
        assert!(n >= 1);
        let parent = (0..n).map(|v| if v == 0 { NO_PARENT } else { 0 }).collect();
        Tree::from_preorder_parents(parent, None).unwrap()
    }

    /// Complete binary tree with the given number of levels, with slots.
    pub fn complete_binary(levels: u32) -> Tree {
        assert!(levels >= 1);
        let mut text = String::from("[]");
        for _ in 1..levels {
            text = format!("[0:{text} 1:{text}]");
        }
        Tree::parse(&text, TreeKind::Slotted(2)).unwrap()
    }
}

/// Parent array of the plane tree with the given preorder degree sequence.
pub(crate) fn lukasiewicz_parents(degrees: &[u32]) -> Result<Vec<u32>, TreeError> {
    if degrees.is_empty() {
        return Err(TreeError::Empty);
    }
    let mut parent = Vec::with_capacity(degrees.len());
    // (vertex, children still to attach)
    let mut open: Vec<(u32, u32)> = Vec::new();
    for (v, &d) in degrees.iter().enumerate() {
        if v == 0 {
            parent.push(NO_PARENT);
        } else {
            let top = open.last_mut().ok_or_else(|| {
                TreeError::InvalidDegrees(format!("sequence closes before vertex {v}"))
            })?;
            parent.push(top.0);
            top.1 -= 1;
            if top.1 == 0 {
                open.pop();
            }
        }
        if d > 0 {
            open.push((v as u32, d));
        }
    }
    if !open.is_empty() {
        return Err(TreeError::InvalidDegrees("sequence ends with open vertices".into()));
    }
    Ok(parent)
}

fn parse_tree(text: &str, kind: TreeKind) -> Result<Tree, TreeError> {
    let (open, close) = match kind {
        TreeKind::Plane => (b'(', b')'),
        TreeKind::Slotted(_) => (b'[', b']'),
    };
    let bytes = text.as_bytes();
    let mut parent: Vec<u32> = Vec::new();
    let mut slot_of: Vec<u32> = Vec::new();
    // (vertex, last slot used among its children)
    let mut stack: Vec<(u32, Option<u32>)> = Vec::new();
    let mut done = false;
    let mut pending_slot: Option<(u32, usize)> = None;
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if done {
            return Err(TreeError::Trailing(i));
        }
        if b == open {
            let slot = match kind {
                TreeKind::Plane => 0,
                TreeKind::Slotted(_) => {
                    if stack.is_empty() {
                        if pending_slot.is_some() {
                            return Err(TreeError::UnexpectedChar { ch: ':', pos: i });
                        }
                        0
                    } else {
                        let (s, _) = pending_slot
                            .take()
                            .ok_or(TreeError::UnexpectedChar { ch: b as char, pos: i })?;
                        s
                    }
                }
            };
            let v = parent.len() as u32;
            match stack.last_mut() {
                Some(top) => {
                    parent.push(top.0);
                    top.1 = Some(slot);
                }
                None => parent.push(NO_PARENT),
            }
            slot_of.push(slot);
            stack.push((v, None));
            i += 1;
        } else if b == close {
            if pending_slot.is_some() {
                return Err(TreeError::UnexpectedChar { ch: b as char, pos: i });
            }
            if stack.pop().is_none() {
                return Err(TreeError::Unbalanced(i));
            }
            if stack.is_empty() {
                done = true;
            }
            i += 1;
        } else if b.is_ascii_digit() && matches!(kind, TreeKind::Slotted(_)) {
            let Some(&(_, last)) = stack.last() else {
                return Err(TreeError::UnexpectedChar { ch: b as char, pos: i });
            };
            if pending_slot.is_some() {
                return Err(TreeError::UnexpectedChar { ch: b as char, pos: i });
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let slot: u32 = text[start..i]
                .parse()
                .map_err(|_| TreeError::UnexpectedChar { ch: b as char, pos: start })?;
            while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            if i >= bytes.len() || bytes[i] != b':' {
                return Err(TreeError::UnexpectedChar {
                    ch: bytes.get(i).map_or(' ', |&c| c as char),
                    pos: i,
                });
            }
            i += 1;
            if let TreeKind::Slotted(arity) = kind {
                if slot >= arity {
                    return Err(TreeError::SlotOutOfRange { slot, arity, pos: start });
                }
            }
            if last.is_some_and(|l| slot <= l) {
                return Err(TreeError::SlotsNotIncreasing(start));
            }
            pending_slot = Some((slot, start));
        } else {
            let ch = text[i..].chars().next().unwrap();
            return Err(TreeError::UnexpectedChar { ch, pos: i });
        }
    }
    if parent.is_empty() {
        return Err(TreeError::Empty);
    }
    if !stack.is_empty() || pending_slot.is_some() {
        return Err(TreeError::Unbalanced(bytes.len()));
    }
    let slots = match kind {
        TreeKind::Plane => None,
        TreeKind::Slotted(d) => Some((slot_of, d)),
    };
    Tree::from_preorder_parents(parent, slots)
}

/// An increasing tree: a shape plus a label permutation of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTree {
    pub shape: Tree,
    // labels[v] for preorder vertex v
    labels: Vec<u32>,
}

impl LabeledTree {
    pub fn new(shape: Tree, labels: Vec<u32>) -> Result<LabeledTree, TreeError> {
        let n = shape.len();
        if labels.len() != n {
            return Err(TreeError::InvalidLabels("label count differs from vertex count".into()));
        }
        let mut seen = vec![false; n];
        for &l in &labels {
            if l == 0 || l as usize > n || seen[l as usize - 1] {
                return Err(TreeError::InvalidLabels("labels are not a permutation of 1..n".into()));
            }
            seen[l as usize - 1] = true;
        }
        for v in 1..n as u32 {
            let p = shape.parent(v).unwrap();
            if labels[p as usize] >= labels[v as usize] {
                return Err(TreeError::InvalidLabels(format!(
                    "labels decrease along the edge into vertex {v}"
                )));
            }
        }
        Ok(LabeledTree { shape, labels })
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.shape.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_smallest_trees() {
        let t = Tree::parse("()", TreeKind::Plane).unwrap();
        assert_eq!(t.len(), 1);
        let t = Tree::parse("(()())", TreeKind::Plane).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.children(0), &[1, 2]);
        let t = Tree::parse("[0:[] 1:[]]", TreeKind::Slotted(2)).unwrap();
        assert_eq!(t.slots(0), Some(&[0, 1][..]));
        assert_eq!(t.arity_bound(), Some(2));
    }

    #[test]
    fn whitespace_is_ignored() {
        let t = Tree::parse(" ( ( )\n( ) ) ", TreeKind::Plane).unwrap();
        assert_eq!(t.serialize(), "(()())");
        let t = Tree::parse("[ 0 : [ ]   1:[]]", TreeKind::Slotted(2)).unwrap();
        assert_eq!(t.serialize(), "[0:[] 1:[]]");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(Tree::parse("", TreeKind::Plane), Err(TreeError::Empty));
        assert_eq!(Tree::parse("   ", TreeKind::Plane), Err(TreeError::Empty));
        assert!(matches!(Tree::parse("(()", TreeKind::Plane), Err(TreeError::Unbalanced(_))));
        assert!(matches!(Tree::parse("())", TreeKind::Plane), Err(TreeError::Trailing(_))));
        assert!(matches!(Tree::parse(")", TreeKind::Plane), Err(TreeError::Unbalanced(_))));
        assert!(matches!(
            Tree::parse("[2:[]]", TreeKind::Slotted(2)),
            Err(TreeError::SlotOutOfRange { slot: 2, arity: 2, .. })
        ));
        assert!(matches!(
            Tree::parse("[1:[] 0:[]]", TreeKind::Slotted(2)),
            Err(TreeError::SlotsNotIncreasing(_))
        ));
        assert!(matches!(
            Tree::parse("[1:[] 1:[]]", TreeKind::Slotted(3)),
            Err(TreeError::SlotsNotIncreasing(_))
        ));
        assert!(matches!(Tree::parse("[[]]", TreeKind::Slotted(2)), Err(TreeError::UnexpectedChar { .. })));
        assert!(matches!(Tree::parse("(x)", TreeKind::Plane), Err(TreeError::UnexpectedChar { .. })));
    }

    #[test]
    fn fringe_sizes_small() {
        let path = Tree::path(3);
        assert_eq!(path.fringe_sizes(), vec![3, 2, 1]);
        let cherry = Tree::star(3);
        assert_eq!(cherry.fringe_sizes(), vec![3, 1, 1]);
        for n in 1..40u64 {
            let s: u64 = Tree::path(n as usize).fringe_sizes().iter().sum();
            assert_eq!(s, n * (n + 1) / 2);
        }
    }

    #[test]
    fn subtree_counts() {
        let z = Tree::path(3).subtree_count_by_size();
        assert_eq!(z.into_iter().collect::<Vec<_>>(), vec![(1, 1), (2, 1), (3, 1)]);
        let z = Tree::star(3).subtree_count_by_size();
        assert_eq!(z.into_iter().collect::<Vec<_>>(), vec![(1, 2), (3, 1)]);
        let z = Tree::complete_binary(3).subtree_count_by_size();
        assert_eq!(z.into_iter().collect::<Vec<_>>(), vec![(1, 4), (3, 2), (7, 1)]);
    }

    #[test]
    fn degree_profiles() {
        let d = Tree::singleton().degree_profile();
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![(0, 1)]);
        let d = Tree::star(3).degree_profile();
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![(0, 2), (2, 1)]);
    }

    #[test]
    fn degrees_round_trip() {
        let t = Tree::parse("((())(()()))", TreeKind::Plane).unwrap();
        let d = t.preorder_degrees();
        assert_eq!(d, vec![2, 1, 0, 2, 0, 0]);
        assert_eq!(Tree::from_preorder_degrees(&d).unwrap(), t);
        assert!(Tree::from_preorder_degrees(&[0, 0]).is_err());
        assert!(Tree::from_preorder_degrees(&[2, 0]).is_err());
    }

    #[test]
    fn child_lists_are_renumbered_to_preorder() {
        // 0 -> [2, 1], 2 -> [3]
        let lists = vec![vec![2, 1], vec![], vec![3], vec![]];
        let (t, ids) = Tree::from_child_lists(0, &lists, None).unwrap();
        assert_eq!(t.serialize(), "((())())");
        assert_eq!(ids, vec![0, 3, 1, 2]);
        let cyclic = vec![vec![1], vec![0]];
        assert!(Tree::from_child_lists(0, &cyclic, None).is_err());
        let disconnected = vec![vec![], vec![]];
        assert!(Tree::from_child_lists(0, &disconnected, None).is_err());
    }

    #[test]
    fn deep_path_does_not_overflow_the_stack() {
        let n = 1_000_000;
        let text = "(".repeat(n) + &")".repeat(n);
        let t = Tree::parse(&text, TreeKind::Plane).unwrap();
        assert_eq!(t.len(), n);
        assert_eq!(t.fringe_sizes()[0], n as u64);
        assert_eq!(t.serialize(), text);
    }

    #[test]
    fn fringe_subtree_extraction() {
        let t = Tree::parse("[0:[0:[1:[]] 1:[]] 1:[0:[] 1:[0:[]]]]", TreeKind::Slotted(2)).unwrap();
        let right = t.children(0)[1];
        assert_eq!(t.fringe_subtree(right).serialize(), "[0:[] 1:[0:[]]]");
    }

    #[test]
    fn labels_must_increase() {
        let shape = Tree::path(3);
        assert!(LabeledTree::new(shape.clone(), vec![1, 2, 3]).is_ok());
        assert!(LabeledTree::new(shape.clone(), vec![2, 1, 3]).is_err());
        assert!(LabeledTree::new(shape, vec![1, 2, 2]).is_err());
    }
}
