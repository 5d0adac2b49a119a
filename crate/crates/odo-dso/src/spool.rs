//! Bounded node queues for the level-by-level FT-tree enumeration.
//!
//! The last level can hold on the order of n^2 (alpha L + beta)^f nodes;
//! builds therefore push next-level work items through a spool that keeps at
//! most `budget` of them in memory and streams the overflow to a temporary
//! file as length-prefixed frames.

use odo_core::{EdgeSet, VertexId};
use serde::{Deserialize, Serialize};
use std::io::{BufReader, BufWriter, Read, Seek, SeekFrom, Write};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpoolNode {
    pub s: VertexId,
    pub t: VertexId,
    pub fail: EdgeSet,
    pub retained_idx: u32,
}

pub struct NodeSpool {
    budget: usize,
    mem: Vec<SpoolNode>,
    spill: Option<BufWriter<tempfile::NamedTempFile>>,
    spilled: u64,
}

impl NodeSpool {
    pub fn new(budget: usize) -> Self {
        NodeSpool {
            budget: budget.max(1),
            mem: Vec::new(),
            spill: None,
            spilled: 0,
        }
    }

    pub fn push(&mut self, node: SpoolNode) {
        if self.mem.len() < self.budget {
            self.mem.push(node);
            return;
        }
        let writer = self.spill.get_or_insert_with(|| {
            BufWriter::new(tempfile::NamedTempFile::new().expect("create spill file"))
        });
        let frame = bincode::serialize(&node).expect("node serializes");
        writer
            .write_all(&(frame.len() as u32).to_le_bytes())
            .and_then(|()| writer.write_all(&frame))
            .expect("write spill frame");
        self.spilled += 1;
    }

    pub fn len(&self) -> u64 {
        self.mem.len() as u64 + self.spilled
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Visits all nodes in push order, in chunks of at most `chunk` items.
    /// Can be called repeatedly; the spill file is rewound per pass.
    pub fn for_each_chunk(
        &mut self,
        chunk: usize,
        mut visit: impl FnMut(&[SpoolNode]),
    ) -> std::io::Result<()> {
        for c in self.mem.chunks(chunk.max(1)) {
            visit(c);
        }
        let Some(writer) = &mut self.spill else {
            return Ok(());
        };
        writer.flush()?;
        let file = writer.get_mut().as_file_mut();
        file.seek(SeekFrom::Start(0))?;
        let mut reader = BufReader::new(file.try_clone()?);
        let mut buf = Vec::new();
        let mut batch: Vec<SpoolNode> = Vec::with_capacity(chunk);
        for _ in 0..self.spilled {
            let mut len_bytes = [0u8; 4];
            reader.read_exact(&mut len_bytes)?;
            let len = u32::from_le_bytes(len_bytes) as usize;
            buf.resize(len, 0);
            reader.read_exact(&mut buf)?;
            batch.push(bincode::deserialize(&buf).expect("spill frame decodes"));
            if batch.len() == chunk {
                visit(&batch);
                batch.clear();
            }
        }
        if !batch.is_empty() {
            visit(&batch);
        }
        file.seek(SeekFrom::End(0))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(i: u32) -> SpoolNode {
        SpoolNode {
            s: i,
            t: i + 1,
            fail: EdgeSet::from_ids(vec![i]),
            retained_idx: i,
        }
    }

    #[test]
    fn spills_beyond_budget_and_replays_in_order() {
        let mut spool = NodeSpool::new(3);
        for i in 0..10 {
            spool.push(node(i));
        }
        assert_eq!(spool.len(), 10);
        for _pass in 0..2 {
            let mut seen = Vec::new();
            spool
                .for_each_chunk(4, |chunk| seen.extend(chunk.iter().map(|n| n.s)))
                .unwrap();
            assert_eq!(seen, (0..10).collect::<Vec<_>>());
        }
    }

    #[test]
    fn all_in_memory_when_budget_suffices() {
        let mut spool = NodeSpool::new(100);
        for i in 0..5 {
            spool.push(node(i));
        }
        let mut seen = 0;
        spool.for_each_chunk(2, |c| seen += c.len()).unwrap();
        assert_eq!(seen, 5);
    }
}
