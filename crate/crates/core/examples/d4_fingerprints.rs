//! Prints the Euler characteristic fingerprint of every module in the D4
//! example, one line per module.

use num_rational::BigRational;
use prepro_core::flag_euler::fingerprint;
use prepro_core::module::d4::build_d4_example;

fn main() -> Result<(), prepro_core::Error> {
    let ex = build_d4_example(&BigRational::from_integer(1.into()))?;
    for (name, m) in ex.named() {
        let fp = fingerprint(m)?;
        let values: Vec<String> = fp.euler.iter().map(|v| v.to_string()).collect();
        println!("{name:<8} {}", values.join(" "));
    }
    Ok(())
}
