#include "rf/harness/campaign.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rf/io/binary.hpp"

namespace rf::harness {

namespace fs = std::filesystem;

namespace {

constexpr io::Magic kCheckpointMagic{'R', 'F', 'C', 'K'};
constexpr std::uint32_t kCheckpointVersion = 1;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string trace_name(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "ep_%06llu.bin", static_cast<unsigned long long>(index));
  return buf;
}

std::string checkpoint_name(std::size_t epoch) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "epoch_%03zu.bin", epoch);
  return buf;
}

void flush_tables(const fs::path& out, const CampaignStats& stats, std::size_t window) {
  std::ostringstream s, q, e;
  write_stats_csv(stats, s);
  write_quad_csv(stats, window, q);
  write_episodes_csv(stats, e);
  write_text(out / "stats.csv", s.str());
  write_text(out / "quad.csv", q.str());
  write_text(out / "episodes.csv", e.str());
}

}  // namespace

std::string exact_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void QuadCounts::add(bool goal, bool violated) {
  if (goal) {
    ++(violated ? goal_violated : goal_respected);
  } else {
    ++(violated ? no_goal_violated : no_goal_respected);
  }
}

CampaignStats summarize(std::vector<EpisodeSummary> episodes, std::size_t episodes_per_epoch) {
  CampaignStats stats;
  stats.episodes = std::move(episodes);
  EpochRow row;
  for (std::size_t i = 0; i < stats.episodes.size(); ++i) {
    const auto& e = stats.episodes[i];
    stats.quad.add(e.goal, e.violated);
    row.successes += e.goal ? 1 : 0;
    row.episodes += 1;
    row.sim_time += e.sim_time;
    const bool epoch_end = episodes_per_epoch > 0 && (i + 1) % episodes_per_epoch == 0;
    if (epoch_end) {
      row.epoch = (i + 1) / episodes_per_epoch;
      row.success_rate = static_cast<double>(row.successes) / static_cast<double>(row.episodes) * 100.0;
      stats.epochs.push_back(row);
    }
  }
  return stats;
}

void write_stats_csv(const CampaignStats& stats, std::ostream& out) {
  out << "epoch,successes,episodes,success_rate,sim_time_s\n";
  for (const auto& r : stats.epochs) {
    out << r.epoch << ',' << r.successes << ',' << r.episodes << ',' << exact_number(r.success_rate) << ','
        << exact_number(r.sim_time) << '\n';
  }
}

void write_quad_csv(const CampaignStats& stats, std::size_t window, std::ostream& out) {
  out << "window,first_episode,last_episode,goal_respected,goal_violated,no_goal_respected,no_goal_violated,"
         "cum_goal_respected,cum_goal_violated,cum_no_goal_respected,cum_no_goal_violated\n";
  if (window == 0) window = 1;
  QuadCounts cum;
  const auto& eps = stats.episodes;
  for (std::size_t start = 0, w = 1; start < eps.size(); start += window, ++w) {
    QuadCounts cell;
    const std::size_t end = std::min(eps.size(), start + window);
    for (std::size_t i = start; i < end; ++i) {
      cell.add(eps[i].goal, eps[i].violated);
      cum.add(eps[i].goal, eps[i].violated);
    }
    out << w << ',' << eps[start].index << ',' << eps[end - 1].index << ',' << cell.goal_respected << ','
        << cell.goal_violated << ',' << cell.no_goal_respected << ',' << cell.no_goal_violated << ','
        << cum.goal_respected << ',' << cum.goal_violated << ',' << cum.no_goal_respected << ','
        << cum.no_goal_violated << '\n';
  }
}

void write_episodes_csv(const CampaignStats& stats, std::ostream& out) {
  out << "episode,epoch,steps,goal,violated,goal_step,reward,sim_time_s\n";
  for (const auto& e : stats.episodes) {
    out << e.index << ',' << e.epoch << ',' << e.steps << ',' << (e.goal ? 1 : 0) << ',' << (e.violated ? 1 : 0)
        << ',';
    if (e.goal_step) out << *e.goal_step;
    out << ',' << exact_number(e.reward) << ',' << exact_number(e.sim_time) << '\n';
  }
}

std::vector<EpisodeSummary> read_episodes_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("episode,epoch,steps,goal,violated", 0) != 0) {
    throw FormatError("episodes.csv: missing or unexpected header");
  }
  std::vector<EpisodeSummary> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 8) throw FormatError("episodes.csv: bad row: " + line);
    try {
      EpisodeSummary e;
      e.index = std::stoull(f[0]);
      e.epoch = std::stoull(f[1]);
      e.steps = std::stoull(f[2]);
      e.goal = f[3] == "1";
      e.violated = f[4] == "1";
      if (!f[5].empty()) e.goal_step = std::stoull(f[5]);
      e.reward = std::stod(f[6]);
      e.sim_time = std::stod(f[7]);
      out.push_back(e);
    } catch (const std::logic_error&) {
      throw FormatError("episodes.csv: bad row: " + line);
    }
  }
  return out;
}

void write_curves_csv(const std::vector<EpisodeSummary>& episodes, std::ostream& out) {
  out << "episode,successes,success_rate,goal_respected,goal_violated,no_goal_respected,no_goal_violated\n";
  QuadCounts q;
  std::size_t successes = 0;
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    const auto& e = episodes[i];
    q.add(e.goal, e.violated);
    successes += e.goal ? 1 : 0;
    out << e.index << ',' << successes << ','
        << exact_number(static_cast<double>(successes) / static_cast<double>(i + 1) * 100.0) << ','
        << q.goal_respected << ',' << q.goal_violated << ',' << q.no_goal_respected << ',' << q.no_goal_violated
        << '\n';
  }
}

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ck) {
  io::ByteWriter w(kCheckpointMagic, kCheckpointVersion);
  w.str(ck.config_json);
  w.u64(ck.seed);
  w.u64(ck.episodes_per_epoch);
  w.u64(ck.epochs_done);
  w.bytes(ck.learner);
  w.u64(ck.episodes.size());
  for (const auto& e : ck.episodes) {
    w.u64(e.index);
    w.u64(e.epoch);
    w.u64(e.steps);
    w.u8(static_cast<std::uint8_t>((e.goal ? 1 : 0) | (e.violated ? 2 : 0) | (e.goal_step ? 4 : 0)));
    w.u64(e.goal_step.value_or(0));
    w.f64(e.reward);
    w.f64(e.sim_time);
  }
  return std::move(w).finish();
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
  io::ByteReader r(bytes, kCheckpointMagic, kCheckpointVersion, "checkpoint");
  Checkpoint ck;
  ck.config_json = r.str();
  ck.seed = r.u64();
  ck.episodes_per_epoch = r.u64();
  ck.epochs_done = r.u64();
  ck.learner = r.bytes();
  const std::uint64_t n = r.u64();
  for (std::uint64_t i = 0; i < n; ++i) {
    EpisodeSummary e;
    e.index = r.u64();
    e.epoch = r.u64();
    e.steps = r.u64();
    const std::uint8_t flags = r.u8();
    const std::uint64_t goal_step = r.u64();
    e.goal = flags & 1;
    e.violated = flags & 2;
    if (flags & 4) e.goal_step = goal_step;
    e.reward = r.f64();
    e.sim_time = r.f64();
    ck.episodes.push_back(e);
  }
  r.expect_end();
  return ck;
}

CampaignStats run_campaign(const scenario::ScenarioConfig& cfg, const CampaignOptions& opts) {
  if (opts.episodes_per_epoch == 0) throw ConfigError("episodes per epoch must be >= 1");
  const std::string config_json = scenario::scenario_to_json(cfg).dump();
  const std::size_t per_epoch = opts.episodes_per_epoch;

  std::unique_ptr<Learner> learner;
  std::vector<EpisodeSummary> episodes;
  std::size_t first_epoch = 1;
  if (opts.resume) {
    const auto ck = decode_checkpoint(io::read_file(opts.resume->string()));
    if (ck.config_json != config_json) throw ConfigError("checkpoint was written for a different scenario");
    if (ck.seed != opts.seed) throw ConfigError("checkpoint seed differs from --seed");
    if (ck.episodes_per_epoch != per_epoch) throw ConfigError("checkpoint epoch size differs");
    learner = load_learner(cfg, ck.learner);
    episodes = ck.episodes;
    first_epoch = ck.epochs_done + 1;
  } else {
    learner = make_learner(cfg, opts.seed);
  }

  const bool artifacts = !opts.out.empty();
  if (artifacts) {
    fs::create_directories(opts.out / "traces");
    fs::create_directories(opts.out / "checkpoints");
    auto resolved = scenario::scenario_to_json(cfg);
    resolved["seed"] = opts.seed;
    write_text(opts.out / "config.resolved.json", resolved.dump(2) + "\n");
  }

  const std::size_t total = opts.epochs * per_epoch;
  const std::size_t window = opts.quad_window ? opts.quad_window : per_epoch;
  for (std::size_t epoch = first_epoch; epoch <= opts.epochs; ++epoch) {
    for (std::size_t i = 0; i < per_epoch; ++i) {
      const std::uint64_t index = (epoch - 1) * per_epoch + i;
      Rng rng = episode_rng(opts.seed, index);
      EpisodeOptions eo;
      eo.seed = opts.seed;
      eo.index = index;
      const auto res = run_episode(cfg, *learner, rng, eo);
      learner->end_episode(index + 1);
      episodes.push_back({index, epoch, res.steps, res.goal_attained, res.constraints_violated, res.goal_step,
                          res.cumulative_reward, res.sim_time});
      if (artifacts && opts.write_traces && (opts.keep_last_traces == 0 || index + opts.keep_last_traces >= total)) {
        io::write_file((opts.out / "traces" / trace_name(index)).string(), encode_trace(res.trace));
      }
      if (opts.on_episode) opts.on_episode(res);
    }
    if (artifacts) {
      Checkpoint ck{config_json, opts.seed, per_epoch, epoch, learner->save(), episodes};
      io::write_file((opts.out / "checkpoints" / checkpoint_name(epoch)).string(), encode_checkpoint(ck));
      flush_tables(opts.out, summarize(episodes, per_epoch), window);
    }
  }
  auto stats = summarize(std::move(episodes), per_epoch);
  if (artifacts) flush_tables(opts.out, stats, window);
  return stats;
}

}  // namespace rf::harness
