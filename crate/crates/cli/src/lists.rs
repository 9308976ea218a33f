//! Lists file: one `<vertex>: <c1> <c2> ...` line per vertex; `#` starts a comment.

pub fn parse_lists(text: &str, n: usize) -> Result<Vec<Vec<u64>>, String> {
    let mut lists: Vec<Option<Vec<u64>>> = vec![None; n];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| format!("lists line {}: {msg}", i + 1);
        let (v, colours) = line.split_once(':').ok_or_else(|| at("expected '<vertex>: <colours>'".into()))?;
        let v: usize = v.trim().parse().map_err(|_| at(format!("invalid vertex '{}'", v.trim())))?;
        if v >= n {
            return Err(at(format!("vertex {v} out of range for {n} vertices")));
        }
        if lists[v].is_some() {
            return Err(at(format!("vertex {v} listed twice")));
        }
        let colours = colours
            .split_whitespace()
            .map(|c| c.parse::<u64>().map_err(|_| at(format!("invalid colour '{c}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        lists[v] = Some(colours);
    }
    lists.into_iter().enumerate().map(|(v, l)| l.ok_or_else(|| format!("no list for vertex {v}"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments_and_gaps() {
        let text = "# lists\n1: 3 4\n\n0: 1 2 # trailing\n";
        assert_eq!(parse_lists(text, 2).unwrap(), vec![vec![1, 2], vec![3, 4]]);
    }

    #[test]
    fn rejects_missing_and_duplicate_vertices() {
        assert!(parse_lists("0: 1\n", 2).unwrap_err().contains("vertex 1"));
        assert!(parse_lists("0: 1\n0: 2\n", 1).is_err());
        assert!(parse_lists("0 1 2\n", 1).is_err());
        assert!(parse_lists("3: 1\n", 2).is_err());
    }
}
