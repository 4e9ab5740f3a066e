//! Unpruned Hellinger distance decision tree.
//!
//! Each node takes the split with the highest Hellinger score over all
//! features (see [`criterion`]). Numeric features split in two at the midpoint
//! of adjacent distinct values; categorical features split K ways, one branch
//! per category present at the node. Growth stops only on purity, the depth
//! limit, `min_leaf`, or when no split scores above zero.

pub mod criterion;

use serde::{Deserialize, Serialize};

pub use criterion::{
    best_split_categorical, best_split_numeric, hellinger_split_score, SplitCandidate, SplitRule,
};

use crate::dataset::{check_schema, Dataset, FeatureKind, FeatureSpec};
use crate::matrix::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeConfig {
    /// Minimum rows per child.
    pub min_leaf: usize,
    /// `None` grows until another stopping rule applies.
    pub max_depth: Option<usize>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            min_leaf: 1,
            max_depth: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassCounts {
    pub pos: usize,
    pub neg: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.pos + self.neg
    }

    /// Majority label; an exact tie goes to the positive class.
    pub fn majority(&self) -> u8 {
        u8::from(self.pos >= self.neg)
    }

    fn add(&mut self, y: u8) {
        if y == 1 {
            self.pos += 1;
        } else {
            self.neg += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    Internal {
        split: SplitCandidate,
        class_counts: ClassCounts,
        children: Vec<TreeNode>,
    },
    Leaf {
        label: u8,
        class_counts: ClassCounts,
    },
}

impl TreeNode {
    pub fn class_counts(&self) -> ClassCounts {
        match self {
            TreeNode::Internal { class_counts, .. } | TreeNode::Leaf { class_counts, .. } => {
                *class_counts
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { children, .. } => {
                1 + children.iter().map(TreeNode::depth).max().unwrap_or(0)
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { children, .. } => children.iter().map(TreeNode::leaf_count).sum(),
        }
    }

    /// True when both trees split on the same features with the same rules
    /// in the same shape. Counts, scores and leaf labels are ignored.
    pub fn same_splits(&self, other: &TreeNode) -> bool {
        match (self, other) {
            (TreeNode::Leaf { .. }, TreeNode::Leaf { .. }) => true,
            (
                TreeNode::Internal {
                    split: a,
                    children: ca,
                    ..
                },
                TreeNode::Internal {
                    split: b,
                    children: cb,
                    ..
                },
            ) => {
                a.feature == b.feature
                    && a.rule == b.rule
                    && ca.len() == cb.len()
                    && ca.iter().zip(cb).all(|(x, y)| x.same_splits(y))
            }
            _ => false,
        }
    }

    fn route(&self, row: &[f64]) -> &TreeNode {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { .. } => return node,
                TreeNode::Internal {
                    split, children, ..
                } => {
                    let x = row[split.feature];
                    node = match &split.rule {
                        SplitRule::Threshold { threshold } => {
                            if x <= *threshold {
                                &children[0]
                            } else {
                                &children[1]
                            }
                        }
                        SplitRule::Categories { categories } => {
                            match categories.iter().position(|&c| c as f64 == x) {
                                Some(k) => &children[k],
                                None => most_populous(children),
                            }
                        }
                    };
                }
            }
        }
    }
}

/// First child with the largest training row count.
fn most_populous(children: &[TreeNode]) -> &TreeNode {
    let mut best = &children[0];
    for c in &children[1..] {
        if c.class_counts().total() > best.class_counts().total() {
            best = c;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HddtModel {
    pub specs: Vec<FeatureSpec>,
    pub root: TreeNode,
    /// Per feature: sum over the nodes splitting on it of
    /// `(rows at node / training rows) * score`.
    pub importances: Vec<f64>,
    pub n_train: usize,
}

impl HddtModel {
    pub fn predict_row(&self, row: &[f64]) -> Result<u8> {
        if row.len() != self.specs.len() {
            return Err(Error::LengthMismatch {
                expected: self.specs.len(),
                actual: row.len(),
            });
        }
        match self.root.route(row) {
            TreeNode::Leaf { label, .. } => Ok(*label),
            TreeNode::Internal { .. } => unreachable!("routing always ends at a leaf"),
        }
    }

    /// Predicts rows laid out in this model's schema. Categorical indices past
    /// the trained category list are treated as unseen categories.
    pub fn predict_matrix(&self, rows: &Matrix) -> Result<Vec<u8>> {
        if rows.ncols() != self.specs.len() {
            return Err(Error::SchemaMismatch(format!(
                "model expects {} features, got {}",
                self.specs.len(),
                rows.ncols()
            )));
        }
        rows.iter_rows().map(|r| self.predict_row(r)).collect()
    }

    pub fn predict(&self, data: &Dataset) -> Result<Vec<u8>> {
        check_schema(data.specs(), &self.specs)?;
        self.predict_matrix(data.features())
    }

    /// Features with positive importance, most important first; ties by index.
    pub fn select_features(&self) -> Vec<usize> {
        let mut selected: Vec<usize> = (0..self.importances.len())
            .filter(|&f| self.importances[f] > 0.0)
            .collect();
        selected.sort_by(|&a, &b| {
            self.importances[b]
                .total_cmp(&self.importances[a])
                .then(a.cmp(&b))
        });
        selected
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

struct Grower<'a> {
    data: &'a Dataset,
    config: TreeConfig,
    importances: Vec<f64>,
}

impl Grower<'_> {
    fn counts(&self, rows: &[usize]) -> ClassCounts {
        let mut c = ClassCounts::default();
        for &i in rows {
            c.add(self.data.labels()[i]);
        }
        c
    }

    fn best_split(&self, rows: &[usize]) -> Option<SplitCandidate> {
        let labels = self.data.labels();
        let features = self.data.features();
        let mut best: Option<SplitCandidate> = None;
        for (f, spec) in self.data.specs().iter().enumerate() {
            let candidate = match spec.kind {
                FeatureKind::Continuous => {
                    let sorted =
                        criterion::sort_column(rows.iter().map(|&i| (features.get(i, f), labels[i])));
                    criterion::search_numeric(f, &sorted, self.config.min_leaf)
                }
                FeatureKind::Categorical => {
                    let mut counts = vec![(0usize, 0usize); spec.categories.len()];
                    for &i in rows {
                        let c = &mut counts[features.get(i, f) as usize];
                        if labels[i] == 1 {
                            c.0 += 1;
                        } else {
                            c.1 += 1;
                        }
                    }
                    criterion::search_categorical(f, &counts, self.config.min_leaf)
                }
            };
            if let Some(c) = candidate {
                if criterion::beats(c.hd_score, 0.0)
                    && best.as_ref().is_none_or(|b| criterion::beats(c.hd_score, b.hd_score))
                {
                    best = Some(c);
                }
            }
        }
        best
    }

    fn grow(&mut self, rows: Vec<usize>, depth: usize) -> TreeNode {
        let class_counts = self.counts(&rows);
        let leaf = TreeNode::Leaf {
            label: class_counts.majority(),
            class_counts,
        };
        if class_counts.pos == 0
            || class_counts.neg == 0
            || self.config.max_depth.is_some_and(|d| depth >= d)
            || rows.len() < 2 * self.config.min_leaf
        {
            return leaf;
        }
        let Some(split) = self.best_split(&rows) else {
            return leaf;
        };

        let features = self.data.features();
        let parts: Vec<Vec<usize>> = match &split.rule {
            SplitRule::Threshold { threshold } => {
                let (left, right) = rows
                    .iter()
                    .partition(|&&i| features.get(i, split.feature) <= *threshold);
                vec![left, right]
            }
            SplitRule::Categories { categories } => categories
                .iter()
                .map(|&c| {
                    rows.iter()
                        .copied()
                        .filter(|&i| features.get(i, split.feature) as usize == c)
                        .collect()
                })
                .collect(),
        };
        self.importances[split.feature] +=
            rows.len() as f64 / self.data.n() as f64 * split.hd_score;
        let children = parts
            .into_iter()
            .map(|part| self.grow(part, depth + 1))
            .collect();
        TreeNode::Internal {
            split,
            class_counts,
            children,
        }
    }
}

/// Grows an unpruned tree on `train`.
pub fn grow_tree(train: &Dataset, config: TreeConfig) -> Result<HddtModel> {
    if config.min_leaf == 0 {
        return Err(Error::param("min_leaf must be at least 1"));
    }
    if train.n() == 0 {
        return Err(Error::InvalidDataset("cannot grow a tree on zero rows".into()));
    }
    let mut grower = Grower {
        data: train,
        config,
        importances: vec![0.0; train.p()],
    };
    let root = grower.grow((0..train.n()).collect(), 0);
    Ok(HddtModel {
        specs: train.specs().to_vec(),
        root,
        importances: grower.importances,
        n_train: train.n(),
    })
}
