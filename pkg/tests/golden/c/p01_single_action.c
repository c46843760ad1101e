/*
 * kiloscript generated Kilobot controller
 * input digest: 4cab117e76e15cc0
 * states: 2 (terminal 1), counters: 0
 * clock: 32 ticks/s, broadcast period: 500 ms
 */
#include "kilolib.h"

static uint16_t cur_state;
static uint32_t state_start_tick;

static const uint32_t STATE_TICKS[2] = {32u, 0u};

static void goto_state(uint16_t s)
{
    cur_state = s;
    state_start_tick = kilo_ticks;
    switch (s) {
    case 0u:
        spinup_motors();
        set_motors(kilo_straight_left, kilo_straight_right);
        set_color(RGB(0, 0, 0));
        break;
    case 1u:  /* terminal */
        set_motors(0, 0);
        set_color(RGB(0, 0, 0));
        break;
    default:
        break;
    }
}

static void setup(void)
{
    goto_state(0u);
}

static void loop(void)
{
    uint32_t now = kilo_ticks;

    switch (cur_state) {
    case 0u:
        if ((uint32_t)(now - state_start_tick) >= STATE_TICKS[0]) {
            goto_state(1u);
        }
        break;
    default:
        break;
    }
}

int main(void)
{
    kilo_init();
    kilo_start(setup, loop);
    return 0;
}
