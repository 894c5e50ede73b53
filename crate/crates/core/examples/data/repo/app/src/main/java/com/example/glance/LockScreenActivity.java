package com.example.glance;

import android.app.Activity;
import android.os.Bundle;

/** Full screen lock screen that is shown when the display turns on. */
public class LockScreenActivity extends Activity {
    private PatternView patternView;
    private int failedAttempts = 0;

    @Override
    protected void onCreate(Bundle savedInstanceState) {
        super.onCreate(savedInstanceState);
        patternView = new PatternView(this);
        setContentView(patternView);
    }

    /** Checks the drawn pattern and unlocks the device when it matches. */
    public boolean unlockWithPattern(String pattern) {
        if (patternView.matches(pattern)) {
            finish();
            return true;
        }
        failedAttempts++;
        return false;
    }
}
