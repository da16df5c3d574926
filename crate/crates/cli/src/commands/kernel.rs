//! `kernel`: materialize Gram matrices as CSV files.
//!
//! Two input modes. With inline `features` in the config the rows are used
//! verbatim (handy for tiny hand-constructed checks); otherwise the
//! configured dataset is pushed through the preparation pipeline and the
//! Gram matrix of the training rows is written.

use qgenml_core::{gram_matrix, FeatureMatrix};

use crate::commands::{ensure_output_dir, load_and_prepare, CliError};
use crate::config::RunConfig;
use crate::run::map_key;

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let features = match &config.features {
        Some(rows) => FeatureMatrix::from_rows(rows.clone())?,
        None => load_and_prepare(config)?.1.train,
    };
    ensure_output_dir(&config.output_dir)?;
    config.echo_to(&config.output_dir)?;

    for map in &config.feature_maps {
        let gram = gram_matrix(map, &features)?;
        let path = config.output_dir.join(format!("kernel_{}.csv", map_key(map.kind)));
        gram.write_csv_file(&path)?;
        println!(
            "{}: {}x{} gram matrix, min eigenvalue {:.3e}, written to {}",
            map.kind.display_name(),
            gram.size(),
            gram.size(),
            gram.min_eigenvalue(),
            path.display()
        );
    }
    Ok(())
}
