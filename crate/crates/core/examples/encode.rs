//! Encodes one random block with both code variants and shows how the
//! flattened codeword is laid out.
//!
//! cargo run --example encode [seed]

use rand::Rng;
use turbonet::codec::{encode_flat, puncture, turbo_encode, TurboCodeConfig};
use turbonet::harness::io::format_bits;
use turbonet::rng::stream_rng;
use turbonet::trellis::{build_trellis, rsce_encode};

fn main() -> turbonet::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let mut rng = stream_rng(seed, 0, 0);
    let u: Vec<u8> = (0..40).map(|_| rng.random_range(0..2)).collect();

    let spec = build_trellis();
    let rsce = rsce_encode(&spec, &u)?;
    println!("u          {}", format_bits(&u));
    println!("parity     {}", format_bits(&rsce.parity));
    println!(
        "tail       sys {} par {} final state {}",
        format_bits(&rsce.tail_systematic),
        format_bits(&rsce.tail_parity),
        rsce.final_state
    );

    for punctured in [false, true] {
        let code = TurboCodeConfig::lte40(punctured);
        let cw = turbo_encode(&code, &u)?;
        let flat = puncture(&code, &cw)?;
        assert_eq!(flat, encode_flat(&code, &u)?);
        println!(
            "\n({}, {}) rate {:.4}\n{}",
            code.k(),
            code.n(),
            code.rate(),
            format_bits(&flat)
        );
        println!("interleaved parity {}", format_bits(&cw.parity2));
        println!("tail bits          {}", format_bits(&cw.tail));
    }
    Ok(())
}
