#include "otfs/predictor.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace otfs {

NormalizationSpec NormalizationSpec::for_config(const OtfsConfig& cfg) {
    return {cfg.T, cfg.delta_f / 2.0};
}

void NormalizationSpec::validate() const {
    if (!(tau_scale > 0.0) || !(nu_scale > 0.0)) {
        throw std::invalid_argument("NormalizationSpec: scales must be positive");
    }
}

PredictorPair PredictorPair::make_untrained(const OtfsConfig& cfg, int l1, int l2,
                                            std::uint64_t seed) {
    cfg.validate();
    PredictorPair pair;
    pair.cfg = cfg;
    pair.norm = NormalizationSpec::for_config(cfg);
    const std::array<int, 4> dims{2, l1, l2, cfg.grid_size()};
    Rng rng_real(seed, make_stream(StreamPurpose::kWeightInitReal));
    pair.fnn_real = FnnModel::random_init(dims, rng_real);
    Rng rng_imag(seed, make_stream(StreamPurpose::kWeightInitImag));
    pair.fnn_imag = FnnModel::random_init(dims, rng_imag);
    pair.validate();
    return pair;
}

void PredictorPair::validate() const {
    cfg.validate();
    norm.validate();
    if (fnn_real.dims != fnn_imag.dims) {
        throw std::invalid_argument("PredictorPair: real/imag networks differ in shape");
    }
    if (fnn_real.dims[0] != 2 || fnn_real.dims[3] != cfg.grid_size()) {
        throw std::invalid_argument("PredictorPair: network dimensions do not match the frame");
    }
}

void PredictorPair::check_compatible(const OtfsConfig& other) const {
    if (cfg.M != other.M || cfg.N != other.N) {
        throw std::invalid_argument("PredictorPair: model trained for a different (M, N) frame");
    }
    if (cfg.m_p != other.m_p || cfg.n_p != other.n_p || cfg.E_p != other.E_p ||
        cfg.delta_f != other.delta_f || cfg.T != other.T) {
        throw std::invalid_argument("PredictorPair: model pilot/geometry does not match config");
    }
}

void tf_target(const OtfsConfig& cfg, double tau, double nu,
               Eigen::VectorXd& real_part, Eigen::VectorXd& imag_part) {
    const CddpmColumn col = cddpm_column_exact(cfg, tau, nu);
    const TfGrid tf = isfft(unvec(col.values, cfg.M, cfg.N));
    const CVec v = vec(tf);
    real_part = v.real();
    imag_part = v.imag();
}

Dataset generate_dataset(const OtfsConfig& cfg, const NormalizationSpec& norm,
                         int n_samples, Rng& rng) {
    cfg.validate();
    norm.validate();
    if (n_samples < 1) throw std::invalid_argument("generate_dataset: n_samples must be >= 1");

    Dataset ds;
    ds.cfg = cfg;
    ds.norm = norm;
    ds.inputs.resize(2, n_samples);
    ds.target_real.resize(cfg.grid_size(), n_samples);
    ds.target_imag.resize(cfg.grid_size(), n_samples);

    Eigen::VectorXd re, im;
    for (int j = 0; j < n_samples; ++j) {
        const double tau = rng.uniform(0.0, norm.tau_scale);
        const double nu = rng.uniform(-norm.nu_scale, norm.nu_scale);
        tf_target(cfg, tau, nu, re, im);
        ds.inputs(0, j) = static_cast<float>(tau / norm.tau_scale);
        ds.inputs(1, j) = static_cast<float>(nu / norm.nu_scale);
        ds.target_real.col(j) = re.cast<float>();
        ds.target_imag.col(j) = im.cast<float>();
    }
    return ds;
}

namespace {

// Combined TF prediction -> DD-domain column.
CVec tf_to_dd_column(const Eigen::VectorXd& re, const Eigen::VectorXd& im,
                     int m_count, int n_count) {
    CVec tf(re.size());
    tf.real() = re;
    tf.imag() = im;
    return vec(sfft(unvec(tf, m_count, n_count)));
}

void note_domain(const PredictorPair& pair, double tau_n, double nu_n) {
    if (tau_n < 0.0 || tau_n > 1.0 || nu_n < -1.0 || nu_n > 1.0) {
        pair.telemetry->out_of_domain_calls.fetch_add(1, std::memory_order_relaxed);
    }
}

}  // namespace

CddpmColumn predict_cddpm_column(const PredictorPair& pair, double tau, double nu) {
    const double tau_n = tau / pair.norm.tau_scale;
    const double nu_n = nu / pair.norm.nu_scale;
    note_domain(pair, tau_n, nu_n);

    Eigen::Vector2f x(static_cast<float>(tau_n), static_cast<float>(nu_n));
    const Eigen::VectorXf re = pair.fnn_real.forward(x);
    const Eigen::VectorXf im = pair.fnn_imag.forward(x);

    CddpmColumn col;
    col.tau = tau;
    col.nu = nu;
    col.values = tf_to_dd_column(re.cast<double>(), im.cast<double>(),
                                 pair.cfg.M, pair.cfg.N);
    return col;
}

SizingCheck validate_latency_sizing(const OtfsConfig& cfg, long l1, long l2) {
    cfg.validate();
    SizingCheck check;
    check.product = static_cast<double>(l1) * static_cast<double>(l2);
    check.budget = std::pow(static_cast<double>(cfg.N), 3.0) *
                   std::pow(static_cast<double>(cfg.M), 4.0) / 2.0;
    check.latency_budget_ok = check.product < check.budget;
    check.hidden_wider_than_output = l1 > cfg.grid_size() && l2 > cfg.grid_size();
    return check;
}

// ---------------------------------------------------------------------------
// Persistence. Both containers share the layout: a line-oriented text header
// terminated by "end_header", then raw little-endian float32 blocks.
// ---------------------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_config_header(std::ostream& out, const OtfsConfig& cfg,
                         const NormalizationSpec& norm) {
    out << "M " << cfg.M << "\n"
        << "N " << cfg.N << "\n"
        << "m_p " << cfg.m_p << "\n"
        << "n_p " << cfg.n_p << "\n"
        << "E_p " << fmt_double(cfg.E_p) << "\n"
        << "delta_f " << fmt_double(cfg.delta_f) << "\n"
        << "T " << fmt_double(cfg.T) << "\n"
        << "f_c " << fmt_double(cfg.f_c) << "\n"
        << "tau_scale " << fmt_double(norm.tau_scale) << "\n"
        << "nu_scale " << fmt_double(norm.nu_scale) << "\n";
}

class HeaderParser {
public:
    explicit HeaderParser(std::istream& in) : in_(in) {}

    // Reads "key value..." and checks the key.
    std::istringstream expect(const std::string& key) {
        std::string line;
        if (!std::getline(in_, line)) {
            throw std::runtime_error("model/dataset file: truncated header (wanted '" +
                                     key + "')");
        }
        std::istringstream ls(line);
        std::string got;
        ls >> got;
        if (got != key) {
            throw std::runtime_error("model/dataset file: expected header key '" + key +
                                     "', found '" + got + "'");
        }
        return std::istringstream(line.substr(got.size()));
    }

    template <typename T>
    T value(const std::string& key) {
        auto ls = expect(key);
        T v{};
        if (!(ls >> v)) {
            throw std::runtime_error("model/dataset file: malformed value for '" + key + "'");
        }
        return v;
    }

    void parse_config(OtfsConfig& cfg, NormalizationSpec& norm) {
        cfg.M = value<int>("M");
        cfg.N = value<int>("N");
        cfg.m_p = value<int>("m_p");
        cfg.n_p = value<int>("n_p");
        cfg.E_p = value<double>("E_p");
        cfg.delta_f = value<double>("delta_f");
        cfg.T = value<double>("T");
        cfg.f_c = value<double>("f_c");
        norm.tau_scale = value<double>("tau_scale");
        norm.nu_scale = value<double>("nu_scale");
    }

private:
    std::istream& in_;
};

void write_f32_block(std::ostream& out, const float* data, std::streamsize count) {
    out.write(reinterpret_cast<const char*>(data),
              count * static_cast<std::streamsize>(sizeof(float)));
}

void read_f32_block(std::istream& in, float* data, std::streamsize count,
                    const char* what) {
    in.read(reinterpret_cast<char*>(data),
            count * static_cast<std::streamsize>(sizeof(float)));
    if (in.gcount() != count * static_cast<std::streamsize>(sizeof(float))) {
        throw std::runtime_error(std::string("model/dataset file: truncated ") + what);
    }
}

using RowMajorF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void write_net(std::ostream& out, const FnnModel& net) {
    auto write_layer = [&out](const Eigen::MatrixXf& w, const Eigen::VectorXf& b) {
        const RowMajorF wr = w;  // weights stored row-major (out x in)
        write_f32_block(out, wr.data(), wr.size());
        write_f32_block(out, b.data(), b.size());
    };
    write_layer(net.w1, net.b1);
    write_layer(net.w2, net.b2);
    write_layer(net.w3, net.b3);
}

FnnModel read_net(std::istream& in, const std::array<int, 4>& dims) {
    FnnModel net = FnnModel::zeros(dims);
    auto read_layer = [&in](Eigen::MatrixXf& w, Eigen::VectorXf& b) {
        RowMajorF wr(w.rows(), w.cols());
        read_f32_block(in, wr.data(), wr.size(), "weight block");
        w = wr;
        read_f32_block(in, b.data(), b.size(), "bias block");
    };
    read_layer(net.w1, net.b1);
    read_layer(net.w2, net.b2);
    read_layer(net.w3, net.b3);
    return net;
}

void check_eof(std::istream& in, const char* what) {
    char extra;
    if (in.read(&extra, 1); in.gcount() != 0) {
        throw std::runtime_error(std::string(what) + ": trailing bytes after parameter blocks");
    }
}

}  // namespace

void save_model(const PredictorPair& pair, const std::string& path) {
    pair.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_model: cannot open '" + path + "'");

    out << "OTFS-FNN-PAIR 1\n";
    write_config_header(out, pair.cfg, pair.norm);
    out << "layer_dims " << pair.fnn_real.dims[0] << " " << pair.fnn_real.dims[1] << " "
        << pair.fnn_real.dims[2] << " " << pair.fnn_real.dims[3] << "\n";
    out << "end_header\n";
    write_net(out, pair.fnn_real);
    write_net(out, pair.fnn_imag);
    if (!out) throw std::runtime_error("save_model: write failed for '" + path + "'");
}

PredictorPair load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_model: cannot open '" + path + "'");

    HeaderParser header(in);
    {
        auto magic = header.expect("OTFS-FNN-PAIR");
        int version = 0;
        if (!(magic >> version) || version != 1) {
            throw std::runtime_error("load_model: unsupported file version");
        }
    }
    PredictorPair pair;
    header.parse_config(pair.cfg, pair.norm);
    std::array<int, 4> dims{};
    {
        auto ls = header.expect("layer_dims");
        if (!(ls >> dims[0] >> dims[1] >> dims[2] >> dims[3])) {
            throw std::runtime_error("load_model: malformed layer_dims");
        }
    }
    header.expect("end_header");

    if (dims[0] != 2) {
        throw std::runtime_error("load_model: input dimension must be 2");
    }
    if (dims[1] < 1 || dims[2] < 1) {
        throw std::runtime_error("load_model: hidden layer dimensions must be positive");
    }
    if (dims[3] != pair.cfg.M * pair.cfg.N) {
        throw std::runtime_error("load_model: output dimension does not equal M*N");
    }

    pair.fnn_real = read_net(in, dims);
    pair.fnn_imag = read_net(in, dims);
    check_eof(in, "load_model");
    pair.validate();
    return pair;
}

void save_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_dataset: cannot open '" + path + "'");

    out << "OTFS-FNN-DATASET 1\n";
    write_config_header(out, ds.cfg, ds.norm);
    out << "count " << ds.inputs.cols() << "\n";
    out << "end_header\n";
    write_f32_block(out, ds.inputs.data(), ds.inputs.size());
    write_f32_block(out, ds.target_real.data(), ds.target_real.size());
    write_f32_block(out, ds.target_imag.data(), ds.target_imag.size());
    if (!out) throw std::runtime_error("save_dataset: write failed for '" + path + "'");
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_dataset: cannot open '" + path + "'");

    HeaderParser header(in);
    {
        auto magic = header.expect("OTFS-FNN-DATASET");
        int version = 0;
        if (!(magic >> version) || version != 1) {
            throw std::runtime_error("load_dataset: unsupported file version");
        }
    }
    Dataset ds;
    header.parse_config(ds.cfg, ds.norm);
    const long count = header.value<long>("count");
    header.expect("end_header");
    if (count < 1) throw std::runtime_error("load_dataset: invalid sample count");

    const int mn = ds.cfg.M * ds.cfg.N;
    ds.inputs.resize(2, count);
    ds.target_real.resize(mn, count);
    ds.target_imag.resize(mn, count);
    read_f32_block(in, ds.inputs.data(), ds.inputs.size(), "inputs block");
    read_f32_block(in, ds.target_real.data(), ds.target_real.size(), "target block");
    read_f32_block(in, ds.target_imag.data(), ds.target_imag.size(), "target block");
    check_eof(in, "load_dataset");
    return ds;
}

// ---------------------------------------------------------------------------
// Column sources
// ---------------------------------------------------------------------------

FnnColumnSource::FnnColumnSource(const PredictorPair& pair) : pair_(pair) {
    pair_.validate();
}

CMat FnnColumnSource::columns(std::span<const DdPair> pairs) const {
    const int mn = pair_.cfg.grid_size();
    Eigen::MatrixXf x(2, static_cast<Eigen::Index>(pairs.size()));
    for (size_t j = 0; j < pairs.size(); ++j) {
        const double tau_n = pairs[j].tau / pair_.norm.tau_scale;
        const double nu_n = pairs[j].nu / pair_.norm.nu_scale;
        note_domain(pair_, tau_n, nu_n);
        x(0, static_cast<Eigen::Index>(j)) = static_cast<float>(tau_n);
        x(1, static_cast<Eigen::Index>(j)) = static_cast<float>(nu_n);
    }
    const Eigen::MatrixXf re = pair_.fnn_real.forward_batch(x);
    const Eigen::MatrixXf im = pair_.fnn_imag.forward_batch(x);

    CMat out(mn, static_cast<Eigen::Index>(pairs.size()));
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        out.col(j) = tf_to_dd_column(re.col(j).cast<double>(), im.col(j).cast<double>(),
                                     pair_.cfg.M, pair_.cfg.N);
    }
    return out;
}

CMat TfOracleColumnSource::columns(std::span<const DdPair> pairs) const {
    const int mn = cfg_.grid_size();
    CMat out(mn, static_cast<Eigen::Index>(pairs.size()));
    Eigen::VectorXd re, im;
    for (size_t j = 0; j < pairs.size(); ++j) {
        tf_target(cfg_, pairs[j].tau, pairs[j].nu, re, im);
        out.col(static_cast<Eigen::Index>(j)) = tf_to_dd_column(re, im, cfg_.M, cfg_.N);
    }
    return out;
}

}  // namespace otfs
