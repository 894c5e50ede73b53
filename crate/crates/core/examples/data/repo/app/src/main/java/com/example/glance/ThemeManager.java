package com.example.glance;

import android.graphics.Color;

/** Picks background and text colors. */
public class ThemeManager {
    private int backgroundColor = Color.WHITE;
    private int textColor = Color.BLACK;

    /** Applies the light color theme. */
    public void applyLightTheme() {
        backgroundColor = Color.WHITE;
        textColor = Color.BLACK;
    }
}
