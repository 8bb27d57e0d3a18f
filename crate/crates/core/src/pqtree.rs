//! PQ-trees for the consecutive-ones property.
//!
//! A P-node's children may be permuted arbitrarily; a Q-node's children may
//! only be reversed. The frontiers reachable through those symmetries are
//! exactly the column orders in which every reduced row is consecutive.
//!
//! Reduction follows the Booth–Lueker template scheme: pertinent nodes are
//! found by bubbling up from the row's leaves, then templates P1–P6 and Q1–Q3
//! are applied bottom-up until the pertinent root is reached. Nodes live in
//! an index arena and each node keeps its parent index, so Q-node interior
//! children need no blocked/unblocked bookkeeping.

use std::collections::VecDeque;

use itertools::Itertools;
use num_bigint::BigUint;
use thiserror::Error;

type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PqError {
    #[error("a PQ-tree needs at least one column")]
    EmptyColumns,
    #[error("column {0} appears twice")]
    DuplicateColumn(usize),
    #[error("unknown column {0}")]
    UnknownColumn(usize),
    #[error("tree became infeasible at row {row}")]
    Infeasible { row: usize },
}

/// Outcome of one [`PqTree::reduce`] call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    Feasible,
    /// No frontier keeps every row seen so far consecutive. `row` is the
    /// 0-based index of the offending row among all rows passed to `reduce`.
    Infeasible {
        row: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Leaf(usize),
    P,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Label {
    Empty,
    Full,
    Partial,
}

#[derive(Debug, Clone)]
struct Node {
    kind: Kind,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    // Scratch state, valid only while `stamp` equals the tree's stamp.
    stamp: u64,
    label: Label,
    pending: usize,
    pertinent_leaves: usize,
}

impl Node {
    fn new(kind: Kind) -> Self {
        Node {
            kind,
            parent: None,
            children: Vec::new(),
            stamp: 0,
            label: Label::Empty,
            pending: 0,
            pertinent_leaves: 0,
        }
    }
}

/// Template failure; the row cannot be made consecutive.
struct Blocked;

#[derive(Debug, Clone)]
pub struct PqTree {
    nodes: Vec<Node>,
    free: Vec<NodeId>,
    root: NodeId,
    leaf_of: Vec<Option<NodeId>>,
    columns: Vec<usize>,
    stamp: u64,
    rows_seen: usize,
    infeasible: Option<usize>,
}

impl PqTree {
    /// The tree admitting every permutation of `columns`: a lone leaf, or a
    /// P-node over all leaves.
    pub fn universal(columns: &[usize]) -> Result<Self, PqError> {
        if columns.is_empty() {
            return Err(PqError::EmptyColumns);
        }
        let max = *columns.iter().max().unwrap();
        let mut leaf_of = vec![None; max + 1];
        let mut nodes = Vec::with_capacity(2 * columns.len());
        for &col in columns {
            if leaf_of[col].is_some() {
                return Err(PqError::DuplicateColumn(col));
            }
            leaf_of[col] = Some(nodes.len());
            nodes.push(Node::new(Kind::Leaf(col)));
        }
        let root = if columns.len() == 1 {
            0
        } else {
            let root = nodes.len();
            let mut p = Node::new(Kind::P);
            p.children = (0..columns.len()).collect();
            nodes.push(p);
            for leaf in &mut nodes[..columns.len()] {
                leaf.parent = Some(root);
            }
            root
        };
        Ok(PqTree {
            nodes,
            free: Vec::new(),
            root,
            leaf_of,
            columns: columns.to_vec(),
            stamp: 0,
            rows_seen: 0,
            infeasible: None,
        })
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn is_feasible(&self) -> bool {
        self.infeasible.is_none()
    }

    /// Index of the row that made the tree infeasible, if any.
    pub fn infeasible_row(&self) -> Option<usize> {
        self.infeasible
    }

    /// Restricts the frontier set to orders in which `row` is consecutive.
    ///
    /// Once a reduction fails the tree stays infeasible and further calls
    /// return [`PqError::Infeasible`].
    pub fn reduce(&mut self, row: &[usize]) -> Result<Reduction, PqError> {
        if let Some(row) = self.infeasible {
            return Err(PqError::Infeasible { row });
        }
        let mut leaves = Vec::with_capacity(row.len());
        for &col in row {
            let leaf = self.leaf_of.get(col).copied().flatten().ok_or(PqError::UnknownColumn(col))?;
            leaves.push(leaf);
        }
        leaves.sort_unstable();
        leaves.dedup();

        let index = self.rows_seen;
        self.rows_seen += 1;
        if leaves.len() <= 1 || leaves.len() == self.columns.len() {
            return Ok(Reduction::Feasible);
        }

        self.stamp += 1;
        let order = self.bubble(&leaves);
        for (i, &x) in order.iter().enumerate() {
            let is_root = i + 1 == order.len();
            let applied = match self.nodes[x].kind {
                Kind::Leaf(_) => {
                    self.nodes[x].label = Label::Full;
                    Ok(())
                }
                Kind::P => self.template_p(x, is_root),
                Kind::Q => self.template_q(x, is_root),
            };
            if applied.is_err() {
                self.infeasible = Some(index);
                return Ok(Reduction::Infeasible { row: index });
            }
        }
        Ok(Reduction::Feasible)
    }

    /// Marks the pertinent subtree and returns it in bottom-up order, ending
    /// at the pertinent root (the deepest node containing every row leaf).
    fn bubble(&mut self, leaves: &[NodeId]) -> Vec<NodeId> {
        let stamp = self.stamp;
        for &leaf in leaves {
            self.mark(leaf);
            let mut x = leaf;
            while let Some(p) = self.nodes[x].parent {
                if self.nodes[p].stamp == stamp {
                    self.nodes[p].pending += 1;
                    break;
                }
                self.mark(p);
                self.nodes[p].pending = 1;
                x = p;
            }
        }

        let total = leaves.len();
        let mut queue: VecDeque<NodeId> = leaves.iter().copied().collect();
        for &leaf in leaves {
            self.nodes[leaf].pertinent_leaves = 1;
        }
        let mut order = Vec::new();
        while let Some(x) = queue.pop_front() {
            order.push(x);
            if self.nodes[x].pertinent_leaves == total {
                break;
            }
            let p = self.nodes[x].parent.expect("pertinent root lies above every row leaf");
            self.nodes[p].pertinent_leaves += self.nodes[x].pertinent_leaves;
            self.nodes[p].pending -= 1;
            if self.nodes[p].pending == 0 {
                queue.push_back(p);
            }
        }
        order
    }

    fn mark(&mut self, x: NodeId) {
        let stamp = self.stamp;
        let node = &mut self.nodes[x];
        node.stamp = stamp;
        node.label = Label::Empty;
        node.pending = 0;
        node.pertinent_leaves = 0;
    }

    fn label(&self, x: NodeId) -> Label {
        let node = &self.nodes[x];
        if node.stamp == self.stamp {
            node.label
        } else {
            Label::Empty
        }
    }

    fn set_label(&mut self, x: NodeId, label: Label) {
        let stamp = self.stamp;
        let node = &mut self.nodes[x];
        if node.stamp != stamp {
            node.stamp = stamp;
            node.pending = 0;
            node.pertinent_leaves = 0;
        }
        node.label = label;
    }

    fn alloc(&mut self, kind: Kind, children: Vec<NodeId>) -> NodeId {
        let mut node = Node::new(kind);
        node.children = children;
        let id = match self.free.pop() {
            Some(id) => {
                self.nodes[id] = node;
                id
            }
            None => {
                self.nodes.push(node);
                self.nodes.len() - 1
            }
        };
        self.adopt_children(id);
        id
    }

    fn release(&mut self, x: NodeId) {
        self.nodes[x].children.clear();
        self.nodes[x].parent = None;
        self.free.push(x);
    }

    fn adopt_children(&mut self, x: NodeId) {
        for i in 0..self.nodes[x].children.len() {
            let child = self.nodes[x].children[i];
            self.nodes[child].parent = Some(x);
        }
    }

    fn set_children(&mut self, x: NodeId, children: Vec<NodeId>) {
        self.nodes[x].children = children;
        self.adopt_children(x);
    }

    /// Puts `new` where `old` hangs in the tree.
    fn replace(&mut self, old: NodeId, new: NodeId) {
        match self.nodes[old].parent {
            Some(p) => {
                let slot = self.nodes[p]
                    .children
                    .iter()
                    .position(|&c| c == old)
                    .expect("child listed under its parent");
                self.nodes[p].children[slot] = new;
                self.nodes[new].parent = Some(p);
            }
            None => {
                self.root = new;
                self.nodes[new].parent = None;
            }
        }
        self.nodes[old].parent = None;
    }

    /// A single full child, or a new full P-node over several.
    fn group_full(&mut self, full: Vec<NodeId>) -> NodeId {
        if full.len() == 1 {
            return full[0];
        }
        let p = self.alloc(Kind::P, full);
        self.set_label(p, Label::Full);
        p
    }

    /// Children of a partial Q-node ordered from its empty end to its full end.
    fn oriented(&self, q: NodeId) -> Vec<NodeId> {
        let mut seq = self.nodes[q].children.clone();
        if self.label(*seq.last().unwrap()) != Label::Full {
            seq.reverse();
        }
        seq
    }

    fn split_children(&self, x: NodeId) -> (Vec<NodeId>, Vec<NodeId>, Vec<NodeId>) {
        let mut empty = Vec::new();
        let mut full = Vec::new();
        let mut partial = Vec::new();
        for &c in &self.nodes[x].children {
            match self.label(c) {
                Label::Empty => empty.push(c),
                Label::Full => full.push(c),
                Label::Partial => partial.push(c),
            }
        }
        (empty, full, partial)
    }

    fn template_p(&mut self, x: NodeId, is_root: bool) -> Result<(), Blocked> {
        let (empty, full, partial) = self.split_children(x);
        // P1
        if empty.is_empty() && partial.is_empty() {
            self.set_label(x, Label::Full);
            return Ok(());
        }
        match (is_root, partial.len()) {
            // P2: gather the full children under one child of the root.
            (true, 0) => {
                let f = self.group_full(full);
                let mut children = empty;
                children.push(f);
                self.set_children(x, children);
            }
            // P3: becomes a partial Q-node [empties, fulls].
            (false, 0) => {
                let f = self.group_full(full);
                let q = self.alloc(Kind::Q, Vec::new());
                self.replace(x, q);
                let e = if empty.len() == 1 {
                    self.release(x);
                    empty[0]
                } else {
                    self.set_children(x, empty);
                    x
                };
                self.set_children(q, vec![e, f]);
                self.set_label(q, Label::Partial);
            }
            // P4: full children join the partial child's full end.
            (true, 1) => {
                let q = partial[0];
                let mut seq = self.oriented(q);
                if !full.is_empty() {
                    seq.push(self.group_full(full));
                }
                self.set_children(q, seq);
                self.collapse_into(x, q, empty);
            }
            // P5: x turns into a partial Q-node built around its partial child.
            (false, 1) => {
                let q = partial[0];
                let mut seq = self.oriented(q);
                if !full.is_empty() {
                    seq.push(self.group_full(full));
                }
                self.replace(x, q);
                if empty.len() == 1 {
                    seq.insert(0, empty[0]);
                    self.release(x);
                } else if empty.len() > 1 {
                    self.set_children(x, empty);
                    seq.insert(0, x);
                } else {
                    self.release(x);
                }
                self.set_children(q, seq);
                self.set_label(q, Label::Partial);
            }
            // P6: two partial children merge through the full ones.
            (true, 2) => {
                let (q1, q2) = (partial[0], partial[1]);
                let mut seq = self.oriented(q1);
                if !full.is_empty() {
                    seq.push(self.group_full(full));
                }
                let mut tail = self.oriented(q2);
                tail.reverse();
                seq.extend(tail);
                self.release(q2);
                self.set_children(q1, seq);
                self.collapse_into(x, q1, empty);
            }
            _ => return Err(Blocked),
        }
        Ok(())
    }

    /// Root P-node `x` keeps its empty children plus `q`, or is replaced by
    /// `q` outright when it has no empty children.
    fn collapse_into(&mut self, x: NodeId, q: NodeId, empty: Vec<NodeId>) {
        if empty.is_empty() {
            self.replace(x, q);
            self.release(x);
        } else {
            let mut children = empty;
            children.push(q);
            self.set_children(x, children);
        }
    }

    fn template_q(&mut self, x: NodeId, is_root: bool) -> Result<(), Blocked> {
        let children = self.nodes[x].children.clone();
        let labels: Vec<Label> = children.iter().map(|&c| self.label(c)).collect();
        // Q1
        if labels.iter().all(|&l| l == Label::Full) {
            self.set_label(x, Label::Full);
            return Ok(());
        }

        let last = children.len() - 1;
        let lo = labels.iter().position(|&l| l != Label::Empty).ok_or(Blocked)?;
        let hi = labels.iter().rposition(|&l| l != Label::Empty).ok_or(Blocked)?;
        if (lo + 1..hi).any(|i| labels[i] != Label::Full) {
            return Err(Blocked);
        }
        if is_root {
            // Q3
            if lo == hi {
                return Err(Blocked);
            }
        } else {
            // Q2: at most one partial child and the full run reaches an end of x.
            let reaches_end = match (labels[lo], labels[hi]) {
                (Label::Full, Label::Full) => lo == 0 || hi == last,
                (Label::Partial, Label::Partial) => lo == hi && (lo == 0 || lo == last),
                (Label::Partial, Label::Full) => hi == last,
                (Label::Full, Label::Partial) => lo == 0,
                _ => false,
            };
            if !reaches_end {
                return Err(Blocked);
            }
        }

        let mut seq = Vec::with_capacity(children.len() + 4);
        seq.extend_from_slice(&children[..lo]);
        for (i, &c) in children.iter().enumerate().take(hi + 1).skip(lo) {
            if labels[i] != Label::Partial {
                seq.push(c);
                continue;
            }
            // Full ends face the full run; a lone partial child faces the end of x.
            let empty_to_full = if lo == hi { lo == last } else { i == lo };
            let mut inner = self.oriented(c);
            if !empty_to_full {
                inner.reverse();
            }
            seq.extend(inner);
            self.release(c);
        }
        seq.extend_from_slice(&children[hi + 1..]);
        self.set_children(x, seq);
        if !is_root {
            self.set_label(x, Label::Partial);
        }
        Ok(())
    }

    /// Columns of the canonical frontier: Q-nodes read as stored, P-node
    /// children in ascending order of their smallest column.
    pub fn one_frontier(&self) -> Result<Vec<usize>, PqError> {
        self.ensure_feasible()?;
        let canon = self.canonical_children();
        let mut out = Vec::with_capacity(self.columns.len());
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            match self.nodes[x].kind {
                Kind::Leaf(col) => out.push(col),
                _ => stack.extend(canon[x].iter().rev()),
            }
        }
        Ok(out)
    }

    /// Number of frontiers: the product of `k!` over P-nodes with `k`
    /// children and of 2 over Q-nodes.
    pub fn count_frontiers(&self) -> Result<BigUint, PqError> {
        self.ensure_feasible()?;
        let mut count = BigUint::from(1u32);
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            let node = &self.nodes[x];
            match node.kind {
                Kind::Leaf(_) => {}
                Kind::P => {
                    for k in 2..=node.children.len() {
                        count *= k;
                    }
                }
                Kind::Q => count *= 2u32,
            }
            stack.extend(&node.children);
        }
        Ok(count)
    }

    /// Up to `cap` distinct frontiers in a fixed order, starting with
    /// [`PqTree::one_frontier`]. Enumeration is depth-first: P-node child
    /// arrangements in lexicographic order of the canonical child list,
    /// Q-nodes as stored and then reversed.
    pub fn enumerate_frontiers(&self, cap: usize) -> Result<Vec<Vec<usize>>, PqError> {
        self.ensure_feasible()?;
        let canon = self.canonical_children();
        let mut walk = Walk {
            tree: self,
            canon: &canon,
            cap,
            prefix: Vec::with_capacity(self.columns.len()),
            pending: vec![self.root],
            out: Vec::new(),
        };
        walk.expand();
        Ok(walk.out)
    }

    fn ensure_feasible(&self) -> Result<(), PqError> {
        match self.infeasible {
            Some(row) => Err(PqError::Infeasible { row }),
            None => Ok(()),
        }
    }

    /// Per node, children in canonical order (see [`PqTree::one_frontier`]).
    fn canonical_children(&self) -> Vec<Vec<NodeId>> {
        let mut min_leaf = vec![usize::MAX; self.nodes.len()];
        let mut canon: Vec<Vec<NodeId>> = vec![Vec::new(); self.nodes.len()];
        // Post-order via an explicit stack.
        let mut stack = vec![(self.root, false)];
        while let Some((x, done)) = stack.pop() {
            let node = &self.nodes[x];
            if let Kind::Leaf(col) = node.kind {
                min_leaf[x] = col;
                continue;
            }
            if !done {
                stack.push((x, true));
                stack.extend(node.children.iter().map(|&c| (c, false)));
                continue;
            }
            let mut children = node.children.clone();
            if node.kind == Kind::P {
                children.sort_by_key(|&c| min_leaf[c]);
            }
            min_leaf[x] = children.iter().map(|&c| min_leaf[c]).min().unwrap();
            canon[x] = children;
        }
        canon
    }

    /// Checks the structural invariants of a feasible tree; used by tests.
    #[doc(hidden)]
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut seen = vec![false; self.leaf_of.len()];
        let mut stack = vec![self.root];
        if self.nodes[self.root].parent.is_some() {
            return Err("root has a parent".into());
        }
        while let Some(x) = stack.pop() {
            let node = &self.nodes[x];
            match node.kind {
                Kind::Leaf(col) => {
                    if seen[col] {
                        return Err(format!("column {col} appears twice"));
                    }
                    seen[col] = true;
                    if !node.children.is_empty() {
                        return Err("leaf with children".into());
                    }
                }
                Kind::P if node.children.len() < 2 => {
                    return Err(format!("P-node {x} has {} children", node.children.len()))
                }
                Kind::Q if node.children.len() < 3 => {
                    return Err(format!("Q-node {x} has {} children", node.children.len()))
                }
                _ => {}
            }
            for &c in &node.children {
                if self.nodes[c].parent != Some(x) {
                    return Err(format!("node {c} does not point back to parent {x}"));
                }
            }
            stack.extend(&node.children);
        }
        for &col in &self.columns {
            if !seen[col] {
                return Err(format!("column {col} missing from the frontier"));
            }
        }
        Ok(())
    }
}

struct Walk<'a> {
    tree: &'a PqTree,
    canon: &'a [Vec<NodeId>],
    cap: usize,
    prefix: Vec<usize>,
    /// Nodes still to be laid out, next one on top.
    pending: Vec<NodeId>,
    out: Vec<Vec<usize>>,
}

impl Walk<'_> {
    fn expand(&mut self) {
        if self.out.len() >= self.cap {
            return;
        }
        let Some(x) = self.pending.pop() else {
            self.out.push(self.prefix.clone());
            return;
        };
        match self.tree.nodes[x].kind {
            Kind::Leaf(col) => {
                self.prefix.push(col);
                self.expand();
                self.prefix.pop();
            }
            Kind::P => {
                let children = &self.canon[x];
                for perm in (0..children.len()).permutations(children.len()) {
                    self.lay_out(perm.iter().map(|&i| children[i]));
                    if self.out.len() >= self.cap {
                        break;
                    }
                }
            }
            Kind::Q => {
                let children = &self.canon[x];
                self.lay_out(children.iter().copied());
                if self.out.len() < self.cap {
                    self.lay_out(children.iter().rev().copied());
                }
            }
        }
        self.pending.push(x);
    }

    fn lay_out(&mut self, children: impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator) {
        let n = children.len();
        self.pending.extend(children.rev());
        self.expand();
        self.pending.truncate(self.pending.len() - n);
    }
}
