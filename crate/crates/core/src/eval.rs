//! Bottom-up evaluation of per-node tables over a nice decomposition.

use std::sync::OnceLock;

use crate::decomposition::NiceDecomposition;
use crate::error::Result;

/// Table storage after an evaluation pass. Children's tables are dropped
/// once their parent is computed unless the caller asked to keep them.
pub struct Evaluated<T> {
    pub root: T,
    /// `Some` for every node when tables were kept; otherwise all `None`.
    pub tables: Vec<Option<T>>,
}

/// Runs `step(t, children)` for every node `t` in post-order.
///
/// With `parallel`, sibling subtrees under join nodes are evaluated with
/// `rayon::join`; all tables are kept in that mode. Both modes call `step`
/// with the same arguments, so they produce the same tables.
pub fn evaluate<T, F>(nd: &NiceDecomposition, keep: bool, parallel: bool, step: F) -> Result<Evaluated<T>>
where
    T: Send + Sync,
    F: Fn(usize, &[&T]) -> Result<T> + Sync,
{
    if parallel {
        let slots: Vec<OnceLock<T>> = (0..nd.len()).map(|_| OnceLock::new()).collect();
        eval_parallel(nd, nd.root(), &slots, &step)?;
        let mut tables: Vec<Option<T>> = slots.into_iter().map(OnceLock::into_inner).collect();
        let root = tables[nd.root()].take().expect("root evaluated");
        if !keep {
            tables.iter_mut().for_each(|t| *t = None);
        }
        return Ok(Evaluated { root, tables });
    }

    let mut tables: Vec<Option<T>> = (0..nd.len()).map(|_| None).collect();
    for t in 0..nd.len() {
        let children = &nd.node(t).children;
        let table = {
            let refs: Vec<&T> = children
                .iter()
                .map(|&c| tables[c].as_ref().expect("child evaluated before parent"))
                .collect();
            step(t, &refs)?
        };
        tables[t] = Some(table);
        if !keep {
            for &c in children {
                tables[c] = None;
            }
        }
    }
    let root = tables[nd.root()].take().expect("root evaluated");
    Ok(Evaluated { root, tables })
}

fn eval_parallel<T, F>(nd: &NiceDecomposition, top: usize, slots: &[OnceLock<T>], step: &F) -> Result<()>
where
    T: Send + Sync,
    F: Fn(usize, &[&T]) -> Result<T> + Sync,
{
    // Follow single-child chains iteratively; recurse only at joins.
    let mut chain = vec![top];
    let mut base = top;
    while nd.node(base).children.len() == 1 {
        base = nd.node(base).children[0];
        chain.push(base);
    }
    if let [a, b] = nd.node(base).children[..] {
        let (ra, rb) = rayon::join(
            || eval_parallel(nd, a, slots, step),
            || eval_parallel(nd, b, slots, step),
        );
        ra?;
        rb?;
    }
    for &t in chain.iter().rev() {
        let refs: Vec<&T> = nd
            .node(t)
            .children
            .iter()
            .map(|&c| slots[c].get().expect("child evaluated before parent"))
            .collect();
        let table = step(t, &refs)?;
        let _ = slots[t].set(table);
    }
    Ok(())
}
