// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spade/graph.hpp"
#include "spade/sparse.hpp"

namespace spade {

/// Node-classification dataset: graph, dense features, class labels, and
/// disjoint train/test masks.
struct LabeledDataset {
    Graph graph;
    DenseMatrix features;  // n x d
    std::vector<int> labels;
    std::vector<uint8_t> train_mask;
    std::vector<uint8_t> test_mask;

    int n_nodes() const { return graph.n_nodes(); }
    int n_classes() const;
    std::vector<int> train_ids() const;
    void validate() const;
};

struct TrainConfig {
    double learning_rate = 0.01;
    double weight_decay = 5e-4;
    int epochs = 5;
    uint64_t seed = 0;
    int hidden_dim = 64;
};

/// Two-layer graph convolutional network: logits = Â relu(Â X W1) W2 with
/// the renormalized propagation Â = D̃^{-1/2}(A+I)D̃^{-1/2} cached on the
/// model. Immutable snapshot once training returns it.
struct GcnModel {
    DenseMatrix w1;  // d x h
    DenseMatrix w2;  // h x C
    int hidden_dim = 0;
    SparseMatrix a_hat;
};

SparseMatrix renormalized_adjacency(const Graph& g);

struct GcnActivations {
    DenseMatrix hidden;  // n x h, post-ReLU
    DenseMatrix logits;  // n x C
};

/// Forward pass with the model's cached propagation matrix.
GcnActivations gcn_forward(const GcnModel& model, const DenseMatrix& features);

/// Forward pass with the propagation matrix of a different graph (fixed
/// weights); used to evaluate structural attacks.
GcnActivations gcn_forward_on(const GcnModel& model, const Graph& graph,
                              const DenseMatrix& features);

double masked_cross_entropy(const DenseMatrix& logits, const std::vector<int>& labels,
                            const std::vector<uint8_t>& mask);

struct GcnGradients {
    DenseMatrix d_w1;
    DenseMatrix d_w2;
    double loss = 0.0;
};

/// Loss and analytic gradients of the masked cross-entropy plus L2 weight
/// decay, for one full-batch step.
GcnGradients gcn_loss_gradients(const GcnModel& model, const DenseMatrix& features,
                                const std::vector<int>& labels,
                                const std::vector<uint8_t>& mask, double weight_decay);

struct TrainResult {
    GcnModel model;
    std::vector<double> test_accuracy;  // one entry per epoch
};

/// Full-batch Adam on the masked cross-entropy. Deterministic for a fixed
/// seed: seeded Glorot init, fixed update order, no shuffling.
TrainResult gcn_train(const LabeledDataset& data, const TrainConfig& cfg);

/// Post-ReLU hidden activations, the embedding used for manifold capture.
DenseMatrix gcn_embed(const GcnModel& model, const LabeledDataset& data);

/// Fraction of masked nodes whose argmax prediction matches the label;
/// argmax ties break toward the lowest class id.
double evaluate_accuracy(const DenseMatrix& logits, const std::vector<int>& labels,
                         const std::vector<uint8_t>& mask);

std::vector<int> argmax_predictions(const DenseMatrix& logits);

/// Citation dataset in the classic content/cites format:
///   <id> <attr_0> ... <attr_{d-1}> <label>   one node per line
///   <cited_id> <citing_id>                   one citation per line
/// Citations with unknown endpoints are skipped (one warning with the
/// count); edges are undirected and binarized. The train/test split samples
/// train_fraction of all nodes with the given seed.
LabeledDataset load_citation_dataset(const std::string& content_path,
                                     const std::string& cites_path,
                                     double train_fraction, uint64_t split_seed);

/// Locates `*.content` and `*.cites` in a directory and loads them.
LabeledDataset load_citation_dir(const std::string& dir, double train_fraction,
                                 uint64_t split_seed);

/// Checkpoints: w1.csv + w2.csv + model.json (dims and config) in `dir`.
void save_gcn_model(const std::string& dir, const GcnModel& model, const TrainConfig& cfg);
GcnModel load_gcn_model(const std::string& dir, const Graph& graph);

}  // namespace spade
