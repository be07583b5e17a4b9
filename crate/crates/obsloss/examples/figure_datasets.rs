//! Write every preset figure dataset (ids 2..=15) into a directory as CSV.
//! The presets pin the fixed parameters, curve families and x-grids, so the
//! files are reproducible byte for byte.
//!
//! Run with:
//!   cargo run --example figure_datasets [output_dir]

use std::path::PathBuf;

use obsloss::figures::{figure_dataset, FIGURE_IDS};

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("figures"));
    std::fs::create_dir_all(&dir).expect("output directory");

    for id in FIGURE_IDS {
        let fig = figure_dataset(id).expect("known id");
        let path = dir.join(fig.file_name());
        std::fs::write(&path, fig.to_csv()).expect("writable output");
        println!(
            "wrote {} ({} rows x {} columns)",
            path.display(),
            fig.rows.len(),
            fig.header.len()
        );
    }
}
