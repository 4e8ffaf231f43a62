/* C API for the best-arm-identification library: bandit instances,
 * analytic oracles (hardness constant, regret floor, max-min weights),
 * seeded simulation campaigns, and the built-in property-check suites.
 *
 * All functions returning bai_status set a thread-local error message
 * retrievable via bai_last_error() on failure. Handles are opaque; every
 * *_create has a matching *_free. Arm indices are 0-based here; the CLI
 * presents them 1-based.
 */
#ifndef BAI_H_
#define BAI_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define BAI_VERSION "0.1.0"

typedef enum {
  BAI_OK = 0,
  BAI_ERR_INVALID_ARGUMENT = 1,
  BAI_ERR_DOMAIN = 2,
  BAI_ERR_RUNTIME = 3
} bai_status;

typedef enum {
  BAI_FAMILY_BERNOULLI = 0,
  BAI_FAMILY_GAUSSIAN = 1, /* fixed known variance */
  BAI_FAMILY_POISSON = 2,
  BAI_FAMILY_EXPONENTIAL = 3
} bai_family_kind;

typedef enum {
  BAI_ALG_DKL_UCB = 0,
  BAI_ALG_KLUCB_STOP = 1,
  BAI_ALG_UNIFORM_STOP = 2
} bai_algorithm;

const char* bai_version(void);
const char* bai_last_error(void);
const char* bai_algorithm_name(bai_algorithm alg);

/* ---- divergences and confidence-bound inversions ------------------- */
/* gaussian_variance is only read for BAI_FAMILY_GAUSSIAN; pass 0 otherwise. */
bai_status bai_kl(bai_family_kind kind, double gaussian_variance, double mu,
                  double mu_prime, double* out);
bai_status bai_kl_bernoulli(double p, double q, double* out);
bai_status bai_kl_upper_inverse(bai_family_kind kind, double gaussian_variance,
                                double mu_hat, double budget, double* out);
bai_status bai_kl_lower_inverse(bai_family_kind kind, double gaussian_variance,
                                double mu_hat, double budget, double* out);

/* ---- instances and oracles ----------------------------------------- */
typedef struct bai_instance bai_instance;

bai_status bai_instance_create(bai_family_kind kind, double gaussian_variance,
                               const double* means, int num_arms,
                               bai_instance** out);
void bai_instance_free(bai_instance* instance);
int bai_instance_num_arms(const bai_instance* instance);
int bai_instance_best_arm(const bai_instance* instance);
bai_status bai_instance_gaps(const bai_instance* instance, double* out);

bai_status bai_hardness_i_star(const bai_instance* instance, double* out);
bai_status bai_regret_lower_bound(const bai_instance* instance, double delta,
                                  double* out);
/* weights_out must hold num_arms doubles. */
bai_status bai_gamma_star(const bai_instance* instance, double* value_out,
                          double* weights_out);
bai_status bai_phi(bai_family_kind kind, double gaussian_variance, double x,
                   double y, double mu_top, double mu_other, double* value_out,
                   double* argmin_out);

/* ---- single trials --------------------------------------------------*/
typedef struct {
  int64_t stopping_time;
  int64_t total_pulls;
  double pseudo_regret;
  double realized_regret;
  int recommended_arm;
  int correct;
  int censored;
} bai_trial_result;

bai_status bai_run_trial(const bai_instance* instance, bai_algorithm alg,
                         double delta, uint64_t seed, int64_t horizon_cap,
                         bai_trial_result* out);

/* ---- campaigns ------------------------------------------------------*/
typedef struct bai_campaign bai_campaign;
typedef struct bai_result bai_result;

/* The instance must outlive the campaign handle. */
bai_status bai_campaign_create(const bai_instance* instance,
                               bai_campaign** out);
void bai_campaign_free(bai_campaign* campaign);
bai_status bai_campaign_add_algorithm(bai_campaign* campaign,
                                      bai_algorithm alg);
bai_status bai_campaign_add_delta(bai_campaign* campaign, double delta);
bai_status bai_campaign_set_trials(bai_campaign* campaign, int trials);
bai_status bai_campaign_set_seed(bai_campaign* campaign, uint64_t seed);
bai_status bai_campaign_set_horizon_cap(bai_campaign* campaign, int64_t cap);
bai_status bai_campaign_set_parallelism(bai_campaign* campaign, int threads);

typedef struct {
  bai_algorithm algorithm;
  double delta;
  int trials;
  int errors;
  int censored;
  double error_rate;
  double error_upper99;
  double mean_pseudo_regret, var_pseudo_regret;
  double mean_realized_regret, var_realized_regret;
  double mean_tau, var_tau;
  double regret_over_log;
  double regret_over_lower_bound; /* +inf when the bound is zero */
  double tau_over_log;
  double tau_over_log_loglog_sq;
} bai_cell_stats;

/* Per-step trace record for the first trial of a cell. Index pointers are
 * NULL for initialization pulls; pulled_arm is -1 for the stopping step. */
typedef struct {
  int64_t t;
  int pulled_arm;
  double reward;
  int arm_f;
  int arm_g;
  int stopped;
  const double* ucb_f;
  const double* ucb_g;
  const double* lcb_g;
  int num_arms;
} bai_trace_step;

typedef void (*bai_trace_callback)(bai_algorithm alg, double delta,
                                   const bai_trace_step* step, void* user);

bai_status bai_campaign_run(const bai_campaign* campaign, bai_result** out);
bai_status bai_campaign_run_traced(const bai_campaign* campaign,
                                   bai_trace_callback trace_cb, void* user,
                                   bai_result** out);
int bai_result_num_cells(const bai_result* result);
bai_status bai_result_cell(const bai_result* result, int index,
                           bai_cell_stats* out);
void bai_result_free(bai_result* result);

/* ---- validation suites ----------------------------------------------*/
#define BAI_VALIDATE_CORRUPT_KL 1u

typedef void (*bai_validate_report)(const char* suite, int passed,
                                    double millis, const char* detail,
                                    void* user);

/* Runs the property suites (all of them, or just suite_filter when non-NULL).
 * flags: BAI_VALIDATE_CORRUPT_KL injects a sign-flipped divergence into the
 * checks (negative control). *all_passed_out is 1 iff every executed suite
 * passed. */
bai_status bai_validate(const char* suite_filter, unsigned flags,
                        bai_validate_report report_cb, void* user,
                        int* all_passed_out);

#ifdef __cplusplus
}
#endif

#endif /* BAI_H_ */
