//! Word problem for the right-angled Coxeter group of a graph.
//!
//! Generators are the vertices of the presentation graph, each an
//! involution, with two generators commuting exactly when adjacent. A
//! [`NormalForm`] is the ShortLex-least reduced word of a group element and
//! doubles as the name of a vertex of the Davis complex.

use crate::error::{Error, Result};
use crate::graph::Graph;
use std::cmp::Ordering;

/// Reduced word, lexicographically least among its commutation class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct NormalForm(Vec<usize>);

impl Ord for NormalForm {
    /// ShortLex: shorter words first, then lexicographic on letters.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for NormalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl NormalForm {
    pub fn identity() -> Self {
        NormalForm(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    /// Word length of the element.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Right multiplication by a generator.
    pub fn mul_letter(&self, g: &Graph, s: usize) -> NormalForm {
        let mut w = self.0.clone();
        push_reduced(g, &mut w, s);
        NormalForm(lex_least(g, w))
    }

    pub fn mul_word(&self, g: &Graph, word: &[usize]) -> NormalForm {
        let mut w = self.0.clone();
        for &s in word {
            push_reduced(g, &mut w, s);
        }
        NormalForm(lex_least(g, w))
    }

    pub fn inverse(&self, g: &Graph) -> NormalForm {
        let mut w = self.0.clone();
        w.reverse();
        NormalForm(lex_least(g, w))
    }

    /// Comma-separated vertex labels.
    pub fn to_labels(&self, g: &Graph) -> String {
        g.labels_of(&self.0).join(",")
    }
}

/// Appends `s` to a reduced word, cancelling it against the last earlier
/// `s` that can be commuted to the end.
fn push_reduced(g: &Graph, w: &mut Vec<usize>, s: usize) {
    for i in (0..w.len()).rev() {
        if w[i] == s {
            w.remove(i);
            return;
        }
        if !g.adjacent(w[i], s) {
            break;
        }
    }
    w.push(s);
}

/// Lexicographically least word in the commutation class of a reduced word:
/// repeatedly extract the smallest letter that commutes past everything
/// before it.
fn lex_least(g: &Graph, mut w: Vec<usize>) -> Vec<usize> {
    let mut out = Vec::with_capacity(w.len());
    while !w.is_empty() {
        let mut best: Option<usize> = None;
        for i in 0..w.len() {
            if best.is_some_and(|b| w[b] <= w[i]) {
                continue;
            }
            if w[..i].iter().all(|&x| g.adjacent(x, w[i])) {
                best = Some(i);
            }
        }
        out.push(w.remove(best.expect("first letter is always extractable")));
    }
    out
}

fn check_letters(g: &Graph, word: &[usize]) -> Result<()> {
    match word.iter().find(|&&s| s >= g.vertex_count()) {
        Some(s) => Err(Error::BadLetter(s.to_string())),
        None => Ok(()),
    }
}

pub fn normal_form(g: &Graph, word: &[usize]) -> Result<NormalForm> {
    check_letters(g, word)?;
    Ok(NormalForm::identity().mul_word(g, word))
}

/// Length of `a^{-1} b`.
pub fn word_distance(g: &Graph, a: &[usize], b: &[usize]) -> Result<usize> {
    check_letters(g, a)?;
    check_letters(g, b)?;
    let mut w: Vec<usize> = a.iter().rev().copied().collect();
    w.extend_from_slice(b);
    Ok(normal_form(g, &w)?.len())
}

/// Distance between two normal forms.
pub fn nf_distance(g: &Graph, a: &NormalForm, b: &NormalForm) -> usize {
    a.inverse(g).mul_word(g, b.letters()).len()
}

/// The group is word-hyperbolic iff the graph has no induced square.
pub fn is_hyperbolic(g: &Graph) -> bool {
    !g.has_induced_square()
}
