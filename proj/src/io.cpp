// SPDX-License-Identifier: Apache-2.0
#include "spade/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "spade/errors.hpp"

namespace spade {

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    return out;
}

std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

// hMETIS files comment with '%'.
std::string strip_hgr_comment(const std::string& line) {
    auto pos = line.find_first_of("%#");
    return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    // %.17g round-trips doubles; trim to the shortest form that reads back equal.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

Graph read_edge_tsv(const std::string& path, int n_nodes) {
    auto in = open_input(path);
    std::vector<Edge> edges;
    int max_id = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(strip_comment(line));
        Edge e;
        if (!(ss >> e.u >> e.v)) continue;  // blank or comment-only line
        if (!(ss >> e.w)) e.w = 1.0;
        max_id = std::max({max_id, e.u, e.v});
        edges.push_back(e);
    }
    int n = n_nodes >= 0 ? n_nodes : max_id + 1;
    if (max_id >= n) {
        throw IoError(path + ": node id " + std::to_string(max_id) +
                      " exceeds forced node count " + std::to_string(n));
    }
    return Graph(n, std::move(edges));
}

void write_edge_tsv(const std::string& path, const Graph& g) {
    auto out = open_output(path);
    out << "# nodes\t" << g.n_nodes() << "\n";
    for (const Edge& e : g.edges()) {
        out << e.u << '\t' << e.v << '\t' << format_double(e.w) << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

Hypergraph read_hmetis(const std::string& path) {
    auto in = open_input(path);
    std::string line;
    long n_edges = -1, n_nodes = -1, fmt = 0;
    while (std::getline(in, line)) {
        std::istringstream ss(strip_hgr_comment(line));
        if (ss >> n_edges >> n_nodes) {
            ss >> fmt;
            break;
        }
    }
    if (n_edges < 0 || n_nodes < 0) throw IoError(path + ": missing hMETIS header");
    const bool weighted = fmt == 1 || fmt == 11;
    std::vector<std::vector<int>> hyperedges;
    std::vector<double> weights;
    int skipped = 0;
    long read = 0;
    while (read < n_edges && std::getline(in, line)) {
        std::string body = strip_hgr_comment(line);
        if (body.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++read;
        std::istringstream ss(body);
        double w = 1.0;
        if (weighted && !(ss >> w)) throw IoError(path + ": bad hyperedge weight");
        std::vector<int> members;
        int v;
        while (ss >> v) {
            if (v < 1 || v > n_nodes) {
                throw IoError(path + ": vertex id " + std::to_string(v) +
                              " outside 1.." + std::to_string(n_nodes));
            }
            members.push_back(v - 1);
        }
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        if (members.size() < 2) {
            ++skipped;
            continue;
        }
        hyperedges.push_back(std::move(members));
        if (weighted) weights.push_back(w);
    }
    if (read < n_edges) {
        throw IoError(path + ": expected " + std::to_string(n_edges) +
                      " hyperedge lines, found " + std::to_string(read));
    }
    if (skipped > 0) {
        warn(path + ": skipped " + std::to_string(skipped) +
             " hyperedges with fewer than 2 distinct members");
    }
    return Hypergraph(static_cast<int>(n_nodes), std::move(hyperedges),
                      weighted ? std::move(weights) : std::vector<double>{});
}

void write_hmetis(const std::string& path, const Hypergraph& h) {
    auto out = open_output(path);
    out << h.n_hyperedges() << ' ' << h.n_nodes();
    if (h.has_weights()) out << " 1";
    out << '\n';
    for (int e = 0; e < h.n_hyperedges(); ++e) {
        if (h.has_weights()) out << format_double(h.weight(e)) << ' ';
        const auto& members = h.hyperedge(e);
        for (size_t i = 0; i < members.size(); ++i) {
            out << members[i] + 1 << (i + 1 == members.size() ? '\n' : ' ');
        }
    }
    if (!out) throw IoError("write failed for " + path);
}

DenseMatrix read_csv_matrix(const std::string& path) {
    auto in = open_input(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::string body = strip_comment(line);
        if (body.find_first_not_of(" \t\r,") == std::string::npos) continue;
        std::vector<double> row;
        std::istringstream ss(body);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw IoError(path + ": ragged CSV row " + std::to_string(rows.size() + 1));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(path + ": empty CSV");
    DenseMatrix m(rows.size(), rows.front().size());
    for (size_t r = 0; r < rows.size(); ++r) {
        for (size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    }
    return m;
}

void write_csv_matrix(const std::string& path, const DenseMatrix& m) {
    auto out = open_output(path);
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            out << format_double(m(r, c)) << (c + 1 == m.cols() ? '\n' : ',');
        }
    }
    if (!out) throw IoError("write failed for " + path);
}

std::vector<int> read_partition(const std::string& path) {
    auto in = open_input(path);
    std::vector<int> assignment;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(strip_comment(line));
        int b;
        if (ss >> b) assignment.push_back(b);
    }
    return assignment;
}

void write_partition(const std::string& path, const std::vector<int>& assignment) {
    auto out = open_output(path);
    for (int b : assignment) out << b << '\n';
    if (!out) throw IoError("write failed for " + path);
}

uint64_t fnv1a(const void* data, size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ull;
    for (size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for hashing");
    uint64_t h = 0xcbf29ce484222325ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const auto got = static_cast<size_t>(in.gcount());
        for (size_t i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

}  // namespace spade
