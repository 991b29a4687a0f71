//! Oracle backends wired up from a configuration file: a word list, a table,
//! a builtin, and an external process speaking the line protocol.

use std::fs;

use semre::matcher::match_semre;
use semre::oracle::{Oracle, OracleConfig};
use semre::syntax::{parse_semre, Query};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("semre-oracles-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("cities.txt"), "Paris\nLima\nOslo\n")?;
    fs::write(
        dir.join("capitals.tsv"),
        "# city\tanswer\nParis\t1\nLima\t1\nZurich\t0\n",
    )?;
    // accepts windows with an even number of characters
    fs::write(
        dir.join("even.sh"),
        "while IFS= read -r l; do s=${l#*\t}; echo $(( ${#s} % 2 == 0 )); done\n",
    )?;
    fs::write(
        dir.join("oracles.cfg"),
        "city = words:cities.txt\ncapital = table:capitals.tsv\npal = palindrome\neven = exec:sh even.sh\n",
    )?;

    let router = OracleConfig::load(&dir.join("oracles.cfg"))?.build()?;
    for (q, s) in [
        ("city", "Oslo"),
        ("capital", "Zurich"),
        ("pal", "level"),
        ("even", "four"),
    ] {
        println!("<{q}>({s:?}) = {}", router.evaluate(&Query::new(q), s.as_bytes())?);
    }

    let r = parse_semre(".*([A-Z][a-z]+)&<city>&<capital>.*")?;
    for line in ["flights to Lima today", "flights to Oslo today", "Zurich again"] {
        println!("{line:<24} {}", match_semre(&r, line.as_bytes(), &router)?.matched);
    }
    fs::remove_dir_all(&dir)?;
    Ok(())
}
