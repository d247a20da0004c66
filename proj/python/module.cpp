#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fgl/dsp.hpp"
#include "fgl/io.hpp"
#include "fgl/nn.hpp"
#include "fgl/radar.hpp"
#include "fgl/sar.hpp"
#include "fgl/scene.hpp"

#include <algorithm>
#include <complex>
#include <vector>

namespace py = pybind11;
using namespace fgl;

namespace {

using carray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;
using darray = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_numpy(const Tensor& t)
{
    std::vector<py::ssize_t> shape(t.shape.begin(), t.shape.end());
    py::array_t<double> out(shape);
    std::copy(t.data.begin(), t.data.end(), out.mutable_data());
    return out;
}

Tensor from_numpy(const darray& a)
{
    Tensor t;
    t.shape.reserve(static_cast<std::size_t>(a.ndim()));
    for (py::ssize_t i = 0; i < a.ndim(); ++i)
        t.shape.push_back(static_cast<int>(a.shape(i)));
    t.data.assign(a.data(), a.data() + a.size());
    return t;
}

dsp::cvec cvec_in(const carray& a)
{
    return dsp::cvec(a.data(), a.data() + a.size());
}

py::array_t<std::complex<double>> cvec_out(const dsp::cvec& v)
{
    py::array_t<std::complex<double>> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<std::complex<double>> cube_data(const radar::BeatCube& cube)
{
    py::array_t<std::complex<double>> out({static_cast<py::ssize_t>(cube.num_channels()),
                                           static_cast<py::ssize_t>(cube.num_samples())});
    std::copy(cube.data.begin(), cube.data.end(), out.mutable_data());
    return out;
}

} // namespace

PYBIND11_MODULE(_fgl, m)
{
    m.doc() = "mmWave gesture laboratory: radar simulation, preprocessing, CNN, SAR imaging";

    py::register_exception<DataFormatError>(m, "DataFormatError");
    py::register_exception<NumericError>(m, "NumericError");

    py::enum_<GestureClass>(m, "GestureClass")
        .value("Palm", GestureClass::Palm)
        .value("Perpendicular", GestureClass::Perpendicular)
        .value("ThumbsUp", GestureClass::ThumbsUp);
    py::enum_<Variant>(m, "Variant")
        .value("Human", Variant::Human)
        .value("Sterile", Variant::Sterile);
    py::enum_<Mode>(m, "Mode")
        .value("Range", Mode::Range)
        .value("RangeAngle", Mode::RangeAngle);

    m.attr("SPEED_OF_LIGHT") = kSpeedOfLight;

    // radar
    py::class_<radar::RadarConfig>(m, "RadarConfig")
        .def(py::init<>())
        .def_readwrite("start_freq", &radar::RadarConfig::start_freq)
        .def_readwrite("bandwidth", &radar::RadarConfig::bandwidth)
        .def_readwrite("slope", &radar::RadarConfig::slope)
        .def_readwrite("duration", &radar::RadarConfig::duration)
        .def_readwrite("n_samples", &radar::RadarConfig::n_samples)
        .def("wavelength", &radar::RadarConfig::wavelength)
        .def("validate", &radar::RadarConfig::validate);

    py::class_<radar::ChannelPair>(m, "ChannelPair")
        .def(py::init<>())
        .def_readwrite("tx_y", &radar::ChannelPair::tx_y)
        .def_readwrite("rx_y", &radar::ChannelPair::rx_y)
        .def("virtual_y", &radar::ChannelPair::virtual_y)
        .def("separation", &radar::ChannelPair::separation);

    py::class_<radar::ArrayGeometry>(m, "ArrayGeometry")
        .def(py::init<>())
        .def_readwrite("tx_y", &radar::ArrayGeometry::tx_y)
        .def_readwrite("rx_y", &radar::ArrayGeometry::rx_y)
        .def_readwrite("z_plane", &radar::ArrayGeometry::z_plane)
        .def("num_channels", &radar::ArrayGeometry::num_channels)
        .def("channels", &radar::ArrayGeometry::channels)
        .def_static("default_2tx4rx", &radar::ArrayGeometry::default_2tx4rx,
                    py::arg("start_freq") = 77.0e9, py::arg("c") = kSpeedOfLight);

    py::class_<radar::PointTarget>(m, "PointTarget")
        .def(py::init<>())
        .def(py::init([](double x, double y, double z, double reflectivity) {
                 return radar::PointTarget{x, y, z, reflectivity};
             }),
             py::arg("x"), py::arg("y"), py::arg("z"), py::arg("reflectivity") = 1.0)
        .def_readwrite("x", &radar::PointTarget::x)
        .def_readwrite("y", &radar::PointTarget::y)
        .def_readwrite("z", &radar::PointTarget::z)
        .def_readwrite("reflectivity", &radar::PointTarget::reflectivity);

    py::class_<radar::TargetCloud>(m, "TargetCloud")
        .def(py::init<>())
        .def_readwrite("points", &radar::TargetCloud::points)
        .def("__len__", [](const radar::TargetCloud& c) { return c.points.size(); });

    py::class_<radar::NoiseSpec>(m, "NoiseSpec")
        .def(py::init<>())
        .def_readwrite("power", &radar::NoiseSpec::power)
        .def_readwrite("seed", &radar::NoiseSpec::seed);

    py::class_<radar::BeatCube>(m, "BeatCube")
        .def(py::init<>())
        .def_readonly("channels", &radar::BeatCube::channels)
        .def_readonly("k_grid", &radar::BeatCube::k_grid)
        .def_readonly("mono_corrected", &radar::BeatCube::mono_corrected)
        .def("num_channels", &radar::BeatCube::num_channels)
        .def("num_samples", &radar::BeatCube::num_samples)
        .def_property_readonly("data", &cube_data);

    m.def("wavenumber_grid", &radar::wavenumber_grid);
    m.def(
        "simulate_point_echo",
        [](const radar::ChannelPair& ch, double z_plane, const radar::PointTarget& t,
           const std::vector<double>& k_grid) {
            return cvec_out(radar::simulate_point_echo(ch, z_plane, t, k_grid));
        },
        py::arg("channel"), py::arg("z_plane"), py::arg("target"), py::arg("k_grid"));
    m.def("simulate_scene", &radar::simulate_scene, py::arg("cloud"), py::arg("geometry"),
          py::arg("config"), py::arg("noise") = radar::NoiseSpec{});
    m.def("multistatic_to_monostatic", &radar::multistatic_to_monostatic, py::arg("cube"),
          py::arg("z0_ref"));

    // dsp
    m.def(
        "fft", [](const carray& x, bool inverse) { return cvec_out(dsp::fft(cvec_in(x), inverse)); },
        py::arg("x"), py::arg("inverse") = false);
    m.def(
        "dft_oracle",
        [](const carray& x, bool inverse) { return cvec_out(dsp::dft_oracle(cvec_in(x), inverse)); },
        py::arg("x"), py::arg("inverse") = false);

    py::class_<dsp::PreprocessConfig>(m, "PreprocessConfig")
        .def(py::init<>())
        .def_readwrite("mode", &dsp::PreprocessConfig::mode)
        .def_readwrite("crop_start", &dsp::PreprocessConfig::crop_start)
        .def_readwrite("crop_bins", &dsp::PreprocessConfig::crop_bins)
        .def_readwrite("n_angle", &dsp::PreprocessConfig::n_angle);

    py::class_<dsp::ProcessedSample>(m, "ProcessedSample")
        .def(py::init<>())
        .def_property(
            "image", [](const dsp::ProcessedSample& s) { return to_numpy(s.image); },
            [](dsp::ProcessedSample& s, const darray& a) { s.image = from_numpy(a); })
        .def_readwrite("label", &dsp::ProcessedSample::label)
        .def_readwrite("variant", &dsp::ProcessedSample::variant)
        .def_readwrite("mode", &dsp::ProcessedSample::mode);

    m.def("preprocess", &dsp::preprocess, py::arg("cube"), py::arg("config"));

    // scene
    py::class_<scene::SubjectParams>(m, "SubjectParams")
        .def(py::init<>())
        .def_readwrite("hand_scale", &scene::SubjectParams::hand_scale)
        .def_readwrite("aspect", &scene::SubjectParams::aspect)
        .def_readwrite("thumb_length", &scene::SubjectParams::thumb_length)
        .def_readwrite("point_density", &scene::SubjectParams::point_density)
        .def_readwrite("base_reflectivity", &scene::SubjectParams::base_reflectivity)
        .def_readwrite("jitter_std", &scene::SubjectParams::jitter_std)
        .def_readwrite("seed", &scene::SubjectParams::seed);

    py::class_<scene::VariantSpec>(m, "VariantSpec")
        .def(py::init<>())
        .def_readwrite("kind", &scene::VariantSpec::kind)
        .def_readwrite("reflectivity_gain", &scene::VariantSpec::reflectivity_gain)
        .def_readwrite("clutter", &scene::VariantSpec::clutter)
        .def_readwrite("noise_power", &scene::VariantSpec::noise_power)
        .def_static("human_default", &scene::VariantSpec::human_default)
        .def_static("sterile_default", &scene::VariantSpec::sterile_default);

    py::class_<scene::ScanAperture>(m, "ScanAperture")
        .def(py::init<>())
        .def_readwrite("width", &scene::ScanAperture::width)
        .def_readwrite("height", &scene::ScanAperture::height)
        .def_readwrite("hand_min", &scene::ScanAperture::hand_min)
        .def_readwrite("hand_max", &scene::ScanAperture::hand_max)
        .def_readwrite("torso_z", &scene::ScanAperture::torso_z);

    m.def("make_gesture_cloud", &scene::make_gesture_cloud, py::arg("cls"), py::arg("subject"),
          py::arg("variant"), py::arg("center_x"), py::arg("center_y"), py::arg("center_z"),
          py::arg("aperture") = scene::ScanAperture{});
    m.def("scan_positions", &scene::scan_positions, py::arg("aperture"), py::arg("n"),
          py::arg("seed"));

    // nn
    py::class_<nn::NetworkSpec>(m, "NetworkSpec")
        .def(py::init<>())
        .def_readwrite("input_h", &nn::NetworkSpec::input_h)
        .def_readwrite("input_w", &nn::NetworkSpec::input_w)
        .def_readwrite("input_c", &nn::NetworkSpec::input_c)
        .def_readwrite("conv_blocks", &nn::NetworkSpec::conv_blocks)
        .def_readwrite("kernel_h", &nn::NetworkSpec::kernel_h)
        .def_readwrite("kernel_w", &nn::NetworkSpec::kernel_w)
        .def_readwrite("filters", &nn::NetworkSpec::filters)
        .def_readwrite("num_classes", &nn::NetworkSpec::num_classes)
        .def_static("for_mode", &nn::NetworkSpec::for_mode);

    py::class_<nn::TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &nn::TrainConfig::learning_rate)
        .def_readwrite("batch_size", &nn::TrainConfig::batch_size)
        .def_readwrite("epochs", &nn::TrainConfig::epochs)
        .def_readwrite("seed", &nn::TrainConfig::seed)
        .def_readwrite("shuffle", &nn::TrainConfig::shuffle);

    py::class_<nn::EpochStats>(m, "EpochStats")
        .def_readonly("epoch", &nn::EpochStats::epoch)
        .def_readonly("train_loss", &nn::EpochStats::train_loss)
        .def_readonly("train_acc", &nn::EpochStats::train_acc)
        .def_readonly("val_loss", &nn::EpochStats::val_loss)
        .def_readonly("val_acc", &nn::EpochStats::val_acc);

    py::class_<nn::Metrics>(m, "Metrics")
        .def_readonly("accuracy", &nn::Metrics::accuracy)
        .def_readonly("loss", &nn::Metrics::loss)
        .def_readonly("confusion", &nn::Metrics::confusion);

    py::class_<nn::Cnn>(m, "Cnn")
        .def_static("init", &nn::Cnn::init, py::arg("spec"), py::arg("seed"))
        .def_readonly("spec", &nn::Cnn::spec)
        .def("forward",
             [](const nn::Cnn& net, const darray& image) { return to_numpy(net.forward(from_numpy(image))); })
        .def("predict", [](const nn::Cnn& net, const darray& image) { return net.predict(from_numpy(image)); });

    py::class_<nn::TrainResult>(m, "TrainResult")
        .def_readonly("model", &nn::TrainResult::model)
        .def_readonly("history", &nn::TrainResult::history)
        .def_readonly("best_epoch", &nn::TrainResult::best_epoch)
        .def_readonly("best_val_accuracy", &nn::TrainResult::best_val_accuracy);

    m.def("train", &nn::train, py::arg("spec"), py::arg("train_set"), py::arg("val_set"),
          py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("evaluate", &nn::evaluate, py::arg("model"), py::arg("dataset"),
          py::call_guard<py::gil_scoped_release>());

    // sar
    py::class_<sar::GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def_readwrite("nx", &sar::GridSpec::nx)
        .def_readwrite("ny", &sar::GridSpec::ny)
        .def_readwrite("x_min", &sar::GridSpec::x_min)
        .def_readwrite("x_max", &sar::GridSpec::x_max)
        .def_readwrite("y_min", &sar::GridSpec::y_min)
        .def_readwrite("y_max", &sar::GridSpec::y_max);

    py::class_<sar::MaskRect>(m, "MaskRect")
        .def(py::init<>())
        .def(py::init([](double x_min, double x_max, double y_min, double y_max) {
                 return sar::MaskRect{x_min, x_max, y_min, y_max};
             }),
             py::arg("x_min"), py::arg("x_max"), py::arg("y_min"), py::arg("y_max"))
        .def_readwrite("x_min", &sar::MaskRect::x_min)
        .def_readwrite("x_max", &sar::MaskRect::x_max)
        .def_readwrite("y_min", &sar::MaskRect::y_min)
        .def_readwrite("y_max", &sar::MaskRect::y_max);

    py::class_<sar::SarImage>(m, "SarImage")
        .def_readonly("nx", &sar::SarImage::nx)
        .def_readonly("ny", &sar::SarImage::ny)
        .def_readonly("x_min", &sar::SarImage::x_min)
        .def_readonly("x_max", &sar::SarImage::x_max)
        .def_readonly("y_min", &sar::SarImage::y_min)
        .def_readonly("y_max", &sar::SarImage::y_max)
        .def_readonly("z_slice", &sar::SarImage::z_slice)
        .def_readonly("peak_value", &sar::SarImage::peak_value)
        .def_property_readonly("pixels", [](const sar::SarImage& im) {
            py::array_t<double> out({static_cast<py::ssize_t>(im.ny), static_cast<py::ssize_t>(im.nx)});
            std::copy(im.pixels.begin(), im.pixels.end(), out.mutable_data());
            return out;
        });

    py::class_<sar::ApertureScan>(m, "ApertureScan")
        .def_readonly("positions", &sar::ApertureScan::positions)
        .def_readonly("z_plane", &sar::ApertureScan::z_plane);

    m.def("raster_positions", &sar::raster_positions, py::arg("width"), py::arg("height"),
          py::arg("per_axis"));
    m.def("make_aperture_scan", &sar::make_aperture_scan, py::arg("cloud"), py::arg("geometry"),
          py::arg("config"), py::arg("positions"), py::arg("z0_ref"), py::arg("noise_power") = 0.0,
          py::arg("seed") = 0, py::call_guard<py::gil_scoped_release>());
    m.def("backproject", &sar::backproject, py::arg("scan"), py::arg("grid"), py::arg("z_slice"),
          py::call_guard<py::gil_scoped_release>());
    m.def("image_snr", &sar::image_snr, py::arg("image"), py::arg("mask"));

    // io
    m.def("write_dataset", &io::write_dataset, py::arg("path"), py::arg("samples"), py::arg("mode"));
    m.def(
        "read_dataset",
        [](const std::string& path) {
            Mode mode = Mode::Range;
            auto samples = io::read_dataset(path, &mode);
            return py::make_tuple(std::move(samples), mode);
        },
        py::arg("path"));
    m.def("write_checkpoint", &io::write_checkpoint, py::arg("path"), py::arg("model"));
    m.def("read_checkpoint", &io::read_checkpoint, py::arg("path"));
    m.def("file_checksum", &io::fnv1a64_file, py::arg("path"));
}
