//! Drive a command from a config string, the way the `csrs` binary does.

use csrs_fiber::cli::{self, Command};
use csrs_fiber::config::RunConfig;
use csrs_fiber::table::Format;

const CONFIG: &str = "
# hotter gas, thinner walls
gas.temperature_k = 320
fiber.wall_nm = 1100
scan.p_max_bar = 250
";

fn main() -> csrs_fiber::Result<()> {
    let cfg = RunConfig::parse(CONFIG)?;
    cfg.validate()?;
    println!("config sha256 {}", cfg.sha256());

    let doc = cli::run_command(Command::Optimize, &cfg)?;
    print!("{}", cli::render_document(&doc, Format::Jsonl, 6));
    Ok(())
}
