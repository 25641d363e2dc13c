// Copyright 2026 The hbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "hbench/env_pool.h"
#include "hbench/environment.h"
#include "hbench/error.h"
#include "hbench/server.h"
#include "hbench/task.h"
#include "hbench/tolerance.h"

namespace py = pybind11;

namespace hbench {
namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
  return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v, py::ssize_t rows, py::ssize_t cols) {
  py::array_t<T> out({rows, cols});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

EnvOptions make_options(const std::string& backend, const std::string& robot,
                        const std::string& collision_profile, const std::string& control,
                        const std::filesystem::path& scene_dir) {
  EnvOptions o;
  o.backend = backend;
  o.robot = robot_variant_from_string(robot);
  o.collision_profile = collision_profile_from_string(collision_profile);
  o.control_mode = control_mode_from_string(control);
  o.scene_dir = scene_dir;
  return o;
}

TaskSpec load_task(const std::string& name, const std::filesystem::path& config_dir) {
  return config_dir.empty() ? find_task(name) : resolve_task(name, config_dir);
}

py::dict step_info(const StepResult& r) {
  py::dict info;
  info["dense"] = r.reward.dense;
  info["sparse"] = r.reward.sparse;
  info["terms"] = r.reward.terms;
  info["reason"] = std::string(to_string(r.termination.reason));
  info["clamped"] = r.clamped;
  return info;
}

// TcpServer serving on a background thread.
class BackgroundServer {
 public:
  BackgroundServer(const std::string& task, int num_envs, std::uint64_t seed, int port,
                   int max_connections)
      : server_(
            [spec = find_task(task), num_envs, seed] {
              SessionOptions so;
              so.num_envs = num_envs;
              so.base_seed = seed;
              return std::make_unique<Session>(spec, EnvOptions{}, so);
            },
            ServerOptions{"127.0.0.1", port, max_connections, false}) {
    thread_ = std::thread([this] {
      try {
        server_.serve();
      } catch (const std::exception&) {
        // The listening socket is gone; nothing more to serve.
      }
    });
  }
  ~BackgroundServer() { close(); }

  int port() const { return server_.port(); }
  void close() {
    if (!thread_.joinable()) return;
    server_.stop();
    py::gil_scoped_release release;
    thread_.join();
  }

 private:
  TcpServer server_;
  std::thread thread_;
};

// EnvClient with an explicit close, so the server sees the disconnect.
class Client {
 public:
  Client(const std::string& host, int port) : client_(std::make_unique<EnvClient>(host, port)) {}
  EnvClient& get() {
    if (!client_) throw Error("client is closed");
    return *client_;
  }
  void close() { client_.reset(); }

 private:
  std::unique_ptr<EnvClient> client_;
};

py::dict result_dict(const wire::StepResultMessage& m) {
  const auto n = static_cast<py::ssize_t>(m.rewards.size());
  const auto d = static_cast<py::ssize_t>(m.obs_dim);
  py::dict out;
  out["observations"] = to_array(m.observations, n, d);
  out["rewards"] = to_array(m.rewards);
  out["dense"] = to_array(m.dense);
  out["sparse"] = to_array(m.sparse);
  out["flags"] = to_array(m.flags);
  out["reasons"] = to_array(m.reasons);
  out["terminal_observations"] = to_array(m.terminal_observations, n, d);
  out["errors"] = m.errors;
  return out;
}

}  // namespace
}  // namespace hbench

PYBIND11_MODULE(_core, m) {
  using namespace hbench;
  m.doc() = "Humanoid task-suite engine";
  py::register_exception<Error>(m, "HbenchError", PyExc_RuntimeError);

  m.def("task_names", &task_names);
  m.def("tolerance",
        [](double x, double lower, double upper, double margin, const std::string& sigmoid,
           double value_at_margin) {
          return tolerance(x, {lower, upper}, margin,
                           {sigmoid_from_string(sigmoid), value_at_margin});
        },
        py::arg("x"), py::arg("lower"), py::arg("upper"), py::arg("margin") = 0.0,
        py::arg("sigmoid") = "gaussian", py::arg("value_at_margin") = 0.1);

  py::class_<Environment>(m, "Environment")
      .def(py::init([](const std::string& task, const std::string& backend,
                       const std::string& robot, const std::string& collision_profile,
                       const std::string& control, const std::filesystem::path& scene_dir,
                       const std::filesystem::path& config_dir) {
             return std::make_unique<Environment>(
                 load_task(task, config_dir),
                 make_options(backend, robot, collision_profile, control, scene_dir));
           }),
           py::arg("task"), py::arg("backend") = "scripted", py::arg("robot") = "full",
           py::arg("collision_profile") = "full", py::arg("control") = "position",
           py::arg("scene_dir") = std::filesystem::path(),
           py::arg("config_dir") = std::filesystem::path())
      .def_property_readonly("task", [](const Environment& e) { return e.task().name; })
      .def_property_readonly("observation_dim", &Environment::observation_dim)
      .def_property_readonly("action_dim", &Environment::action_dim)
      .def_property_readonly("episode_cap", [](const Environment& e) { return e.task().episode_cap; })
      .def_property_readonly("success_target",
                             [](const Environment& e) { return e.task().success_target; })
      .def("manifest", &Environment::manifest_json)
      .def("reset", [](Environment& e, std::uint64_t seed) { return to_array(e.reset(seed)); },
           py::arg("seed") = 0)
      .def("step", [](Environment& e, const DoubleArray& action) {
        if (action.ndim() != 1) throw Error("action must be one-dimensional");
        StepResult r;
        {
          py::gil_scoped_release release;
          r = e.step({action.data(), static_cast<std::size_t>(action.size())});
        }
        return py::make_tuple(to_array(r.observation), r.reward.total,
                              r.termination.terminated, step_info(r));
      });

  py::class_<EnvPool>(m, "EnvPool")
      .def(py::init([](const std::string& task, int num_envs, int num_threads,
                       const std::string& backend, const std::string& robot,
                       const std::string& collision_profile, const std::string& control,
                       const std::filesystem::path& scene_dir) {
             return std::make_unique<EnvPool>(
                 find_task(task),
                 make_options(backend, robot, collision_profile, control, scene_dir), num_envs,
                 num_threads);
           }),
           py::arg("task"), py::arg("num_envs"), py::arg("num_threads") = 1,
           py::arg("backend") = "scripted", py::arg("robot") = "full",
           py::arg("collision_profile") = "full", py::arg("control") = "position",
           py::arg("scene_dir") = std::filesystem::path())
      .def_property_readonly("size", &EnvPool::size)
      .def_property_readonly("observation_dim", &EnvPool::observation_dim)
      .def_property_readonly("action_dim", &EnvPool::action_dim)
      .def("episode_seed", &EnvPool::episode_seed)
      .def("reset",
           [](EnvPool& p, std::uint64_t seed) {
             {
               py::gil_scoped_release release;
               p.reset(seed);
             }
             return to_array(p.observations(), p.size(), p.observation_dim());
           },
           py::arg("seed") = 0)
      .def("step", [](EnvPool& p, const DoubleArray& actions) {
        const std::vector<EnvSlotResult>* results = nullptr;
        {
          py::gil_scoped_release release;
          results = &p.step({actions.data(), static_cast<std::size_t>(actions.size())});
        }
        const auto n = static_cast<py::ssize_t>(p.size());
        py::array_t<double> rewards(n);
        py::array_t<bool> dones(n);
        py::list infos;
        for (py::ssize_t i = 0; i < n; ++i) {
          const EnvSlotResult& r = (*results)[i];
          rewards.mutable_at(i) = r.reward;
          dones.mutable_at(i) = r.done;
          py::dict info;
          info["dense"] = r.dense;
          info["sparse"] = r.sparse;
          info["reason"] = std::string(to_string(r.reason));
          if (r.done) info["terminal_observation"] = to_array(r.terminal_observation);
          if (r.error) info["error"] = r.error_message;
          infos.append(info);
        }
        return py::make_tuple(to_array(p.observations(), n, p.observation_dim()), rewards,
                              dones, infos);
      });

  py::class_<BackgroundServer>(m, "Server")
      .def(py::init<const std::string&, int, std::uint64_t, int, int>(), py::arg("task"),
           py::arg("num_envs") = 1, py::arg("seed") = 0, py::arg("port") = 0,
           py::arg("max_connections") = -1)
      .def_property_readonly("port", &BackgroundServer::port)
      .def("close", &BackgroundServer::close);

  py::class_<Client>(m, "Client")
      .def(py::init<const std::string&, int>(), py::arg("host"), py::arg("port"))
      .def("hello",
           [](Client& c) {
             const wire::SpecMessage s = c.get().hello();
             py::dict out;
             out["obs_dim"] = s.obs_dim;
             out["action_dim"] = s.action_dim;
             out["episode_cap"] = s.episode_cap;
             out["success_target"] = s.success_target;
             out["base_seed"] = s.base_seed;
             out["manifest"] = s.manifest;
             return out;
           })
      .def("reset",
           [](Client& c, std::uint64_t seed) { return result_dict(c.get().reset(seed)); },
           py::arg("seed") = 0)
      .def("step",
           [](Client& c, const FloatArray& actions) {
             return result_dict(
                 c.get().step({actions.data(), static_cast<std::size_t>(actions.size())}));
           })
      .def("close", &Client::close)
      .def("__enter__", [](Client& c) -> Client& { return c; })
      .def("__exit__", [](Client& c, py::args) { c.close(); });
}
