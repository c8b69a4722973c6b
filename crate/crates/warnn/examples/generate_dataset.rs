//! Generate a synthetic fingerprint dataset, write it to CSV, and load it
//! back through the default schema.

use warnn::dataset::{
    default_ap_layout, generate_synthetic, load_csv, ColumnSchema, LoadOptions, SyntheticParams,
};

fn main() -> warnn::Result<()> {
    let params = SyntheticParams {
        grid: (10, 10, 2),
        spacing: 2.0,
        ap_positions: default_ap_layout((10, 10, 2), 2.0, 4),
        tx_power: -30.0,
        path_loss_exponent: 2.5,
        noise_sd: 3.0,
        seed: 42,
    };
    let dataset = generate_synthetic("demo", &params)?;
    println!(
        "generated {} fingerprints over a 10x10x2 grid with {} APs",
        dataset.len(),
        dataset.ap_count()
    );

    let path = std::env::temp_dir().join("warnn_demo.csv");
    dataset.save_csv(&path)?;
    let reloaded = load_csv(&path, "demo", &ColumnSchema::default(), &LoadOptions::default())?;
    assert_eq!(dataset, reloaded);
    println!("round-tripped through {}", path.display());

    let sample = &dataset.samples()[0];
    println!(
        "first sample: rss = {:?}, position = {:?}",
        sample.rss, sample.position
    );
    Ok(())
}
