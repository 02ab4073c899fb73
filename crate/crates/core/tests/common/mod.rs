#![allow(dead_code)]

use qtda::{DataPoint, DistanceMatrix, MatrixMode};

pub fn euclidean(points: &[Vec<f64>]) -> DistanceMatrix {
    let rows = points
        .iter()
        .map(|a| {
            points
                .iter()
                .map(|b| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
                .collect()
        })
        .collect();
    DistanceMatrix::from_rows(rows, MatrixMode::Euclidean, "raw").unwrap()
}

pub fn points(values: &[Vec<f64>]) -> Vec<DataPoint> {
    values.iter().map(|v| DataPoint::new(v.clone()).unwrap()).collect()
}

/// Connected components of the `d <= eps` graph.
pub fn union_find_components(d: &DistanceMatrix, eps: f64) -> usize {
    let n = d.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if d.get(i, j) <= eps {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}
