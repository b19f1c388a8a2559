package app;

class Broken {
    void unfinished() {
        int x = 1;
