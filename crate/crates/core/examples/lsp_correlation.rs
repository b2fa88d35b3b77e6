//! Correlation matrix of per-location large-scale parameters, next to the
//! shipped measured coefficients.

use mmwchan::io::ReferenceTables;
use mmwchan::validate::{lsp_correlation_matrix, LSP_NAMES};
use mmwchan::LspRecord;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> mmwchan::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let records: Vec<LspRecord> = (0..500)
        .map(|i| {
            let z: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
            // shadow fading pulls delay spread down, angular spreads move together
            let sf = 8.0 * z[0];
            LspRecord {
                location_id: format!("RX{i}"),
                rms_ds_ns: Some(10f64.powf(1.6 - 0.02 * sf + 0.2 * z[1])),
                asd_deg: Some(10f64.powf(1.0 + 0.2 * z[2])),
                asa_deg: Some(10f64.powf(1.3 + 0.15 * z[2] + 0.1 * z[3])),
                sf_db: Some(sf),
                ..LspRecord::default()
            }
        })
        .collect();
    let m = lsp_correlation_matrix(&records)?;
    print!("{:>5}", "");
    for n in LSP_NAMES {
        print!("{n:>8}");
    }
    println!();
    for (i, row) in m.values.iter().enumerate() {
        print!("{:>5}", LSP_NAMES[i]);
        for v in row {
            print!("{:>8}", v.map_or("-".to_string(), |x| format!("{x:.3}")));
        }
        println!();
    }

    let reference = &ReferenceTables::builtin().correlation["28GHz-NLOS"];
    println!(
        "measured 28 GHz NLOS DS-SF: {:?} (reproducible from shipped data: {})",
        reference.get("DS", "SF"),
        reference.reproducible
    );
    Ok(())
}
