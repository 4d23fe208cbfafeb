use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{TLDiagram, TLElement};
use crate::arith::{quantum_integer, QFrac, RootContext};
use crate::error::{Error, Result};

// The projector is a formal object; only its range depends on r.
fn cache() -> &'static Mutex<HashMap<usize, Arc<TLElement>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<TLElement>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Jones–Wenzl projector `f^(n)`, valid for `0 ≤ n ≤ r - 1`.
pub fn jones_wenzl(ctx: &RootContext, n: usize) -> Result<Arc<TLElement>> {
    if n + 1 > ctx.r() as usize {
        return Err(Error::ColorOutOfRange {
            color: n as u32,
            max: ctx.r() - 1,
        });
    }
    Ok(projector(n))
}

pub(crate) fn projector(n: usize) -> Arc<TLElement> {
    if let Some(p) = cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let p = Arc::new(build(n));
    cache().lock().unwrap().entry(n).or_insert(p).clone()
}

// f(n) = f(n-1) + ([n-1]/[n]) f(n-1) e_{n-1} f(n-1), with f(n-1) embedded in TL_n
fn build(n: usize) -> TLElement {
    if n <= 1 {
        return TLElement::identity(n);
    }
    let prev = projector(n - 1).embed(n);
    let e = TLElement::from_diagram(TLDiagram::generator(n, n - 1));
    let sandwich = prev.compose(&e).unwrap().compose(&prev).unwrap();
    let ratio = &QFrac::new(quantum_integer(n as u32 - 1)) * &QFrac::inv_quantum(n as u32);
    prev.add(&sandwich.scale(&ratio)).unwrap()
}
