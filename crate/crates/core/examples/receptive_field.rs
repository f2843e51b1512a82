//! Count, for one output node, how many computation paths reach each input
//! pixel. Overlapping windows concentrate the paths in the center.

use vfl::receptive_field::{count_map, theoretical_size, LayerSpec};

fn show(name: &str, arch: &[LayerSpec]) -> vfl::Result<()> {
    let n = theoretical_size(arch);
    let map = count_map(arch, (n, n), (0, 0))?;
    println!("{name}: {n}x{n} field, {} paths, peak {}", map.total(), map.max());
    for row in map.rows() {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>4}")).collect();
        println!("{}", cells.join(""));
    }
    println!();
    Ok(())
}

fn main() -> vfl::Result<()> {
    show("two 3x3 convs", &[LayerSpec::conv(3, 1, 0), LayerSpec::conv(3, 1, 0)])?;
    show("three 3x3 convs", &[LayerSpec::conv(3, 1, 0); 3])?;
    show("conv, 2x2 pool, conv", &[LayerSpec::conv(3, 1, 0), LayerSpec::pool(2, 2), LayerSpec::conv(3, 1, 0)])?;
    Ok(())
}
