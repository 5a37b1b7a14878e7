use wk_core::{DTable, Route};

/// Returns a table holding every block needed for `n` variables.
pub fn filled_table(n: usize) -> DTable {
    let mut table = DTable::new();
    table
        .ensure(n, wk_core::pengine::r_max(n), Route::Auto)
        .expect("table fill");
    table
}
