// SPDX-License-Identifier: Apache-2.0
#include "spade/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "spade/errors.hpp"
#include "spade/io.hpp"
#include "spade/laplacian.hpp"
#include "spade/rng.hpp"

namespace spade {

int LabeledDataset::n_classes() const {
    int c = 0;
    for (int label : labels) c = std::max(c, label + 1);
    return c;
}

std::vector<int> LabeledDataset::train_ids() const {
    std::vector<int> ids;
    for (int i = 0; i < n_nodes(); ++i) {
        if (train_mask[i]) ids.push_back(i);
    }
    return ids;
}

void LabeledDataset::validate() const {
    const size_t n = static_cast<size_t>(graph.n_nodes());
    if (labels.size() != n || train_mask.size() != n || test_mask.size() != n ||
        static_cast<size_t>(features.rows()) != n) {
        throw ParameterError("LabeledDataset: field sizes disagree with the graph");
    }
    if (!features.allFinite()) throw ParameterError("LabeledDataset: non-finite feature");
    for (size_t i = 0; i < n; ++i) {
        if (labels[i] < 0) throw ParameterError("LabeledDataset: negative class id");
        if (train_mask[i] && test_mask[i]) {
            throw ParameterError("LabeledDataset: masks overlap at node " +
                                 std::to_string(i));
        }
    }
}

SparseMatrix renormalized_adjacency(const Graph& g) {
    const int n = g.n_nodes();
    std::vector<double> inv_sqrt(n);
    for (int p = 0; p < n; ++p) inv_sqrt[p] = 1.0 / std::sqrt(g.degree(p) + 1.0);
    SparseMatrix a(n, n);
    std::vector<int> per_row(n);
    for (int p = 0; p < n; ++p) per_row[p] = static_cast<int>(g.neighbors(p).size()) + 1;
    a.reserve(per_row);
    for (int p = 0; p < n; ++p) {
        auto nbrs = g.neighbors(p);
        auto wts = g.neighbor_weights(p);
        size_t i = 0;
        for (; i < nbrs.size() && nbrs[i] < p; ++i) {
            a.insert(p, nbrs[i]) = wts[i] * inv_sqrt[p] * inv_sqrt[nbrs[i]];
        }
        a.insert(p, p) = inv_sqrt[p] * inv_sqrt[p];  // self-loop
        for (; i < nbrs.size(); ++i) {
            a.insert(p, nbrs[i]) = wts[i] * inv_sqrt[p] * inv_sqrt[nbrs[i]];
        }
    }
    a.makeCompressed();
    return a;
}

namespace {

void check_forward_shapes(const GcnModel& model, const DenseMatrix& features) {
    if (features.cols() != model.w1.rows()) {
        throw ParameterError("gcn_forward: feature dim " + std::to_string(features.cols()) +
                             " does not match W1 rows " + std::to_string(model.w1.rows()));
    }
    if (features.rows() != model.a_hat.rows()) {
        throw ParameterError("gcn_forward: node count mismatch with propagation matrix");
    }
}

GcnActivations forward_with(const SparseMatrix& a_hat, const GcnModel& model,
                            const DenseMatrix& features) {
    GcnActivations act;
    DenseMatrix z1 = a_hat * features;
    act.hidden = (z1 * model.w1).cwiseMax(0.0);
    act.logits = (a_hat * act.hidden) * model.w2;
    return act;
}

// Row-wise stable softmax.
DenseMatrix softmax_rows(const DenseMatrix& logits) {
    DenseMatrix out(logits.rows(), logits.cols());
    for (int i = 0; i < logits.rows(); ++i) {
        const double mx = logits.row(i).maxCoeff();
        Eigen::RowVectorXd e = (logits.row(i).array() - mx).exp();
        out.row(i) = e / e.sum();
    }
    return out;
}

int count_mask(const std::vector<uint8_t>& mask) {
    int c = 0;
    for (uint8_t m : mask) c += m != 0;
    return c;
}

}  // namespace

GcnActivations gcn_forward(const GcnModel& model, const DenseMatrix& features) {
    check_forward_shapes(model, features);
    return forward_with(model.a_hat, model, features);
}

GcnActivations gcn_forward_on(const GcnModel& model, const Graph& graph,
                              const DenseMatrix& features) {
    if (graph.n_nodes() != features.rows()) {
        throw ParameterError("gcn_forward_on: node count mismatch");
    }
    if (features.cols() != model.w1.rows()) {
        throw ParameterError("gcn_forward_on: feature dim mismatch");
    }
    return forward_with(renormalized_adjacency(graph), model, features);
}

double masked_cross_entropy(const DenseMatrix& logits, const std::vector<int>& labels,
                            const std::vector<uint8_t>& mask) {
    const int m = count_mask(mask);
    if (m == 0) throw ParameterError("masked_cross_entropy: empty mask");
    double loss = 0.0;
    for (int i = 0; i < logits.rows(); ++i) {
        if (!mask[i]) continue;
        const double mx = logits.row(i).maxCoeff();
        const double lse = mx + std::log((logits.row(i).array() - mx).exp().sum());
        loss += lse - logits(i, labels[i]);
    }
    return loss / m;
}

GcnGradients gcn_loss_gradients(const GcnModel& model, const DenseMatrix& features,
                                const std::vector<int>& labels,
                                const std::vector<uint8_t>& mask, double weight_decay) {
    check_forward_shapes(model, features);
    const int m = count_mask(mask);
    if (m == 0) throw ParameterError("gcn_loss_gradients: empty mask");

    const SparseMatrix& a_hat = model.a_hat;
    DenseMatrix z1 = a_hat * features;       // n x d
    DenseMatrix pre = z1 * model.w1;         // n x h
    DenseMatrix hidden = pre.cwiseMax(0.0);  // n x h
    DenseMatrix z2 = a_hat * hidden;         // n x h
    DenseMatrix logits = z2 * model.w2;      // n x C

    GcnGradients grads;
    grads.loss = masked_cross_entropy(logits, labels, mask);

    DenseMatrix dlogits = softmax_rows(logits);
    for (int i = 0; i < dlogits.rows(); ++i) {
        if (mask[i]) {
            dlogits(i, labels[i]) -= 1.0;
            dlogits.row(i) /= static_cast<double>(m);
        } else {
            dlogits.row(i).setZero();
        }
    }

    grads.d_w2 = z2.transpose() * dlogits + weight_decay * model.w2;
    DenseMatrix dhidden = (a_hat * dlogits) * model.w2.transpose();  // a_hat symmetric
    DenseMatrix dpre =
        ((pre.array() > 0.0).cast<double>() * dhidden.array()).matrix();
    grads.d_w1 = z1.transpose() * dpre + weight_decay * model.w1;
    return grads;
}

namespace {

DenseMatrix glorot_init(int rows, int cols, Rng& rng) {
    const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
    DenseMatrix w(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) w(i, j) = rng.uniform(-a, a);
    }
    return w;
}

struct AdamState {
    DenseMatrix m, v;
    explicit AdamState(const DenseMatrix& shape)
        : m(DenseMatrix::Zero(shape.rows(), shape.cols())),
          v(DenseMatrix::Zero(shape.rows(), shape.cols())) {}

    void step(DenseMatrix& w, const DenseMatrix& grad, double lr, int t) {
        constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        m = b1 * m + (1.0 - b1) * grad;
        v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
        const double c1 = 1.0 - std::pow(b1, t);
        const double c2 = 1.0 - std::pow(b2, t);
        w.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
    }
};

}  // namespace

TrainResult gcn_train(const LabeledDataset& data, const TrainConfig& cfg) {
    data.validate();
    if (cfg.epochs < 1) throw ParameterError("gcn_train: epochs must be >= 1");
    if (!(cfg.learning_rate >= 0.0)) throw ParameterError("gcn_train: bad learning rate");
    if (count_mask(data.train_mask) == 0) {
        throw ParameterError("gcn_train: empty training mask");
    }

    TrainResult result;
    GcnModel& model = result.model;
    model.hidden_dim = cfg.hidden_dim;
    model.a_hat = renormalized_adjacency(data.graph);
    Rng rng(cfg.seed);
    model.w1 = glorot_init(static_cast<int>(data.features.cols()), cfg.hidden_dim, rng);
    model.w2 = glorot_init(cfg.hidden_dim, data.n_classes(), rng);

    AdamState adam1(model.w1), adam2(model.w2);
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        GcnGradients grads = gcn_loss_gradients(model, data.features, data.labels,
                                                data.train_mask, cfg.weight_decay);
        if (!std::isfinite(grads.loss)) {
            throw DivergenceError(epoch, "gcn_train: loss diverged at epoch " +
                                             std::to_string(epoch));
        }
        adam1.step(model.w1, grads.d_w1, cfg.learning_rate, epoch);
        adam2.step(model.w2, grads.d_w2, cfg.learning_rate, epoch);
        const GcnActivations act = gcn_forward(model, data.features);
        result.test_accuracy.push_back(
            evaluate_accuracy(act.logits, data.labels, data.test_mask));
    }
    return result;
}

DenseMatrix gcn_embed(const GcnModel& model, const LabeledDataset& data) {
    return gcn_forward(model, data.features).hidden;
}

std::vector<int> argmax_predictions(const DenseMatrix& logits) {
    std::vector<int> preds(logits.rows());
    for (int i = 0; i < logits.rows(); ++i) {
        int best = 0;
        for (int c = 1; c < logits.cols(); ++c) {
            if (logits(i, c) > logits(i, best)) best = c;  // ties keep the lower id
        }
        preds[i] = best;
    }
    return preds;
}

double evaluate_accuracy(const DenseMatrix& logits, const std::vector<int>& labels,
                         const std::vector<uint8_t>& mask) {
    const int m = count_mask(mask);
    if (m == 0) throw ParameterError("evaluate_accuracy: empty mask");
    const std::vector<int> preds = argmax_predictions(logits);
    int correct = 0;
    for (int i = 0; i < logits.rows(); ++i) {
        if (mask[i] && preds[i] == labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(m);
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return tokens;
}

}  // namespace

LabeledDataset load_citation_dataset(const std::string& content_path,
                                     const std::string& cites_path,
                                     double train_fraction, uint64_t split_seed) {
    if (!(train_fraction > 0.0) || train_fraction >= 1.0) {
        throw ParameterError("load_citation_dataset: train fraction must be in (0,1)");
    }
    std::ifstream content(content_path);
    if (!content) throw IoError("cannot open " + content_path);

    std::vector<std::string> node_ids;
    std::vector<std::string> label_names;
    std::vector<std::vector<double>> feature_rows;
    std::unordered_map<std::string, int> id_index;
    std::string line;
    while (std::getline(content, line)) {
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (tokens.size() < 3) {
            throw IoError(content_path + ": node line needs id, attributes, label");
        }
        id_index.emplace(tokens.front(), static_cast<int>(node_ids.size()));
        node_ids.push_back(tokens.front());
        label_names.push_back(tokens.back());
        std::vector<double> row(tokens.size() - 2);
        for (size_t i = 1; i + 1 < tokens.size(); ++i) {
            row[i - 1] = std::strtod(tokens[i].c_str(), nullptr);
        }
        feature_rows.push_back(std::move(row));
    }
    const int n = static_cast<int>(node_ids.size());
    if (n == 0) throw IoError(content_path + ": no nodes");
    const size_t dim = feature_rows.front().size();
    for (const auto& row : feature_rows) {
        if (row.size() != dim) throw IoError(content_path + ": ragged feature rows");
    }

    // Deterministic class ids: lexicographic order of the label names.
    std::vector<std::string> classes = label_names;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    std::unordered_map<std::string, int> class_index;
    for (size_t c = 0; c < classes.size(); ++c) class_index.emplace(classes[c], c);

    LabeledDataset data;
    data.features.resize(n, static_cast<int>(dim));
    data.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        for (size_t j = 0; j < dim; ++j) data.features(i, j) = feature_rows[i][j];
        data.labels[i] = class_index.at(label_names[i]);
    }

    std::ifstream cites(cites_path);
    if (!cites) throw IoError("cannot open " + cites_path);
    std::set<std::pair<int, int>> pairs;  // binarized undirected citations
    int unknown = 0;
    while (std::getline(cites, line)) {
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (tokens.size() != 2) throw IoError(cites_path + ": citation line needs two ids");
        auto a = id_index.find(tokens[0]);
        auto b = id_index.find(tokens[1]);
        if (a == id_index.end() || b == id_index.end()) {
            ++unknown;
            continue;
        }
        if (a->second == b->second) continue;
        pairs.emplace(std::min(a->second, b->second), std::max(a->second, b->second));
    }
    if (unknown > 0) {
        warn(cites_path + ": skipped " + std::to_string(unknown) +
             " citations with unknown node ids");
    }
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (const auto& [u, v] : pairs) edges.push_back({u, v, 1.0});
    data.graph = Graph(n, std::move(edges));

    // Seeded split: sample ceil(train_fraction * n) training nodes.
    Rng rng(split_seed);
    const int n_train = static_cast<int>(std::ceil(train_fraction * n));
    std::vector<int> order = rng.sample_without_replacement(n, n);
    data.train_mask.assign(n, 0);
    data.test_mask.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        (i < n_train ? data.train_mask : data.test_mask)[order[i]] = 1;
    }
    data.validate();
    return data;
}

LabeledDataset load_citation_dir(const std::string& dir, double train_fraction,
                                 uint64_t split_seed) {
    namespace fs = std::filesystem;
    std::string content, cites;
    if (!fs::is_directory(dir)) throw IoError(dir + " is not a directory");
    std::vector<fs::path> entries;
    for (const auto& entry : fs::directory_iterator(dir)) entries.push_back(entry.path());
    std::sort(entries.begin(), entries.end());
    for (const auto& path : entries) {
        if (path.extension() == ".content" && content.empty()) content = path.string();
        if (path.extension() == ".cites" && cites.empty()) cites = path.string();
    }
    if (content.empty() || cites.empty()) {
        throw IoError(dir + ": expected one .content and one .cites file");
    }
    return load_citation_dataset(content, cites, train_fraction, split_seed);
}

void save_gcn_model(const std::string& dir, const GcnModel& model, const TrainConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    write_csv_matrix((fs::path(dir) / "w1.csv").string(), model.w1);
    write_csv_matrix((fs::path(dir) / "w2.csv").string(), model.w2);
    nlohmann::json header{
        {"hidden_dim", model.hidden_dim},
        {"input_dim", model.w1.rows()},
        {"n_classes", model.w2.cols()},
        {"learning_rate", cfg.learning_rate},
        {"weight_decay", cfg.weight_decay},
        {"epochs", cfg.epochs},
        {"seed", cfg.seed},
    };
    std::ofstream out(fs::path(dir) / "model.json");
    if (!out) throw IoError("cannot write model.json in " + dir);
    out << header.dump(2) << '\n';
}

GcnModel load_gcn_model(const std::string& dir, const Graph& graph) {
    namespace fs = std::filesystem;
    std::ifstream in(fs::path(dir) / "model.json");
    if (!in) throw IoError("cannot read model.json in " + dir);
    nlohmann::json header = nlohmann::json::parse(in);
    GcnModel model;
    model.hidden_dim = header.at("hidden_dim").get<int>();
    model.w1 = read_csv_matrix((fs::path(dir) / "w1.csv").string());
    model.w2 = read_csv_matrix((fs::path(dir) / "w2.csv").string());
    if (model.w1.cols() != model.hidden_dim || model.w2.rows() != model.hidden_dim) {
        throw IoError(dir + ": checkpoint dims disagree with the header");
    }
    model.a_hat = renormalized_adjacency(graph);
    return model;
}

}  // namespace spade
